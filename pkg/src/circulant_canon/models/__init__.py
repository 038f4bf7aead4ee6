"""
This file marks the models directory as a Python package for data models.
"""
