"""Input models, result models and the error hierarchy."""
