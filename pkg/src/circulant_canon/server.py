"""
Main entry point for the circulant canonization MCP Server.

This server exposes the spectral and canonization tools through the Model Context
Protocol. It mounts one sub-server for each group of tools and registers a bulk tool
caller on the root server.
"""

from logging import Logger, getLogger

from fastmcp import FastMCP
from fastmcp.contrib.bulk_tool_caller import BulkToolCaller

from circulant_canon.models.settings import get_settings
from circulant_canon.servers.canon_tools import CanonOperations
from circulant_canon.servers.spectral_tools import SpectralOperations

logger: Logger = getLogger(__name__)


def build_server() -> FastMCP:
    """
    Builds the root MCP server with the spectral and canon sub-servers mounted.
    Disabled tools are removed based on settings.
    """
    settings = get_settings()

    root_mcp = FastMCP("CirculantCanonMCP", dependencies=["fastmcp"])
    spectral_mcp = FastMCP("SpectralOperations", dependencies=["fastmcp"])
    canon_mcp = FastMCP("CanonOperations", dependencies=["fastmcp"])

    spectral_operations = SpectralOperations(denied_operations=settings.disabled_spectral_tools)
    spectral_operations.register_all(spectral_mcp)

    canon_operations = CanonOperations(denied_operations=settings.disabled_canon_tools)
    canon_operations.register_all(canon_mcp)

    bulk_tool_caller = BulkToolCaller()
    bulk_tool_caller.register_all(root_mcp)

    root_mcp.mount("spectral", spectral_mcp)
    root_mcp.mount("canon", canon_mcp)
    return root_mcp


def main():
    """
    Entry point for running the circulant canonization MCP server.
    """
    settings = get_settings()
    logger.info(f"Starting MCP server over {settings.mcp_transport}")
    build_server().run(transport=settings.mcp_transport)


if __name__ == "__main__":
    main()
