# econ/__init__.py
