"""
Gunicorn settings for serving the API in production.

Usage: gunicorn -c gunicorn.conf.py app.main:app
"""
from app.core.config import settings

bind = f"{settings.SERVER_HOST}:{settings.SERVER_PORT}"
workers = settings.WORKERS
worker_class = "uvicorn.workers.UvicornWorker"
loglevel = settings.LOG_LEVEL.lower()
accesslog = "-"
errorlog = "-"
