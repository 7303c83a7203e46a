import os

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Largest group whose automorphisms, cohomology or Aut_G category we compute
    GROUP_ORDER_CAP: int = int(os.getenv("GROUP_ORDER_CAP", "12"))

    # Largest |G|·|Π| materialized as an extension table
    EXTENSION_ORDER_CAP: int = int(os.getenv("EXTENSION_ORDER_CAP", "32"))

    # Aut_G categories with at most this many objects are checked for strictness on every object
    STRICT_CHECK_OBJECTS: int = int(os.getenv("STRICT_CHECK_OBJECTS", "8"))

    # Largest |N|^|M| enumerated when listing quadratic maps
    QUAD_ENUMERATION_CAP: int = int(os.getenv("QUAD_ENUMERATION_CAP", "100000"))

    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    class Config:
        env_file = ".env"


# Create a settings instance
settings = Settings()


def get_settings() -> Settings:
    return settings
