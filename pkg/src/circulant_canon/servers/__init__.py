"""
This file marks the servers directory as a Python package for MCP tool servers.
"""
