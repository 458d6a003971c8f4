from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from .config import get_settings
from .routers import norms, expansions, decompositions, weights, verify, factorize, ensembles, suite
from .utils.logging import configure_logging


def create_app() -> FastAPI:
    settings = get_settings()
    configure_logging(settings.LOG_LEVEL)
    app = FastAPI(title=settings.APP_NAME, redirect_slashes=True)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=settings.ALLOWED_ORIGINS,
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    app.include_router(norms.router, prefix=settings.API_PREFIX)
    app.include_router(expansions.router, prefix=settings.API_PREFIX)
    app.include_router(decompositions.router, prefix=settings.API_PREFIX)
    app.include_router(weights.router, prefix=settings.API_PREFIX)
    app.include_router(verify.router, prefix=settings.API_PREFIX)
    app.include_router(factorize.router, prefix=settings.API_PREFIX)
    app.include_router(ensembles.router, prefix=settings.API_PREFIX)
    app.include_router(suite.router, prefix=settings.API_PREFIX)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    return app


app = create_app()
