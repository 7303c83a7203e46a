from setuptools import setup, find_packages

setup(
    name="categorical-groups",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "fastapi>=0.115.0",
        "uvicorn>=0.27.0",
        "pydantic>=2.0.0",
        "pydantic-settings>=2.0.0",
        "python-dotenv>=1.0.0",
        "sympy>=1.14",
    ],
    entry_points={
        "console_scripts": [
            "grcat=app.cli:main",
        ],
    },
)
