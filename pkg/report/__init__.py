# report/__init__.py
