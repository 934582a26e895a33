"""Loader package."""
from .profile_writer import ProfileWriter

__all__ = ["ProfileWriter"]
