"""
Utility helpers shared by the command line and the MCP tools.
"""
