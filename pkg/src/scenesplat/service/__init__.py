from .config import EngineConfig, load_engine_config
from .models import ModelBundle, default_models
from .session import SessionStore, SessionVersion
from .app import create_app

__all__ = [
    "EngineConfig",
    "load_engine_config",
    "ModelBundle",
    "default_models",
    "SessionStore",
    "SessionVersion",
    "create_app",
]
