"""Configuration module"""

from config.config import cfg

__all__ = ["cfg"]
