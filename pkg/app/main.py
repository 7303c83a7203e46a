import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import settings
from app.routers import algebra

logging.basicConfig(level=settings.LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")

# Create FastAPI app
app = FastAPI(
    title="Categorical Groups",
    description="Cohomology, Gr-functors, braided types and group extensions of finite categorical groups",
    version="1.0.0",
    swagger_ui_parameters={
        "deepLinking": True,
        "displayOperationId": True,
        "defaultModelsExpandDepth": 3,
        "defaultModelExpandDepth": 3,
        "docExpansion": "list",
        "filter": True,
    }
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:3000"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(algebra.router)

@app.get("/")
def read_root():
    return {"message": "Categorical Groups Service Running"}

@app.get("/health")
def health_check():
    return {"status": "healthy"}
