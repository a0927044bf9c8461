from fastapi import FastAPI
from app.config import SERVICE_HOST, SERVICE_PORT, SERVICE_TITLE, SERVICE_VERSION
from app.routes import router as api_router

app = FastAPI(
    title=SERVICE_TITLE,
    version=SERVICE_VERSION,
    description="Derivations, covector bimodules and reflexivity of finite-dimensional algebras over Q"
)

app.include_router(
    api_router,
    prefix="/api",
    tags=["algebras"]
)


@app.get("/")
async def root():
    """Service info"""
    return {
        "service": SERVICE_TITLE,
        "version": SERVICE_VERSION,
        "endpoints": [
            "GET /api/catalog",
            "POST /api/algebras/validate",
            "POST /api/reports",
            "POST /api/checks",
        ],
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("main:app", host=SERVICE_HOST, port=SERVICE_PORT, reload=True)
