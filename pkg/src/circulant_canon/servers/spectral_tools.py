"""
MCP Server exposing the exact spectrum and walk-matrix verdicts of circulants.
"""

from logging import getLogger

from fastmcp import Context
from fastmcp.contrib.mcp_mixin import MCPMixin, mcp_tool
from pydantic import BaseModel, Field

from circulant_canon.core import ConnectionSet, cayley
from circulant_canon.spectral import eigenvalue_matrix, saturation_bound
from circulant_canon.utils.exception_handling import handle_tool_errors
from circulant_canon.walk import walk_matrix, walk_rank

logger = getLogger(__name__)


class SpectrumReport(BaseModel):
    connection_set: str = Field(description="The connection set as 'n: s1,s2,...'.")
    distinct_eigenvalues: int = Field(description="Number of pairwise distinct eigenvalues.")
    simple_spectrum: bool = Field(description="All n eigenvalues are distinct.")
    saturated_spectrum: bool | None = Field(
        default=None, description="Exactly ceil((n+1)/2) distinct eigenvalues; only for inverse-closed sets."
    )
    eigenvalues: list[list[int]] = Field(
        default_factory=list, description="Residue coefficients of every eigenvalue in Z[zeta_n]."
    )


class WalkReport(BaseModel):
    connection_set: str
    rank: int = Field(description="Rank of the walk matrix to vertex 0 over the rationals.")
    distinct_rows: int
    walk_discrete: bool
    walk_saturated: bool | None = None


class SpectralOperations(MCPMixin):
    """
    This class provides MCP tools for the exact spectra and walk matrices of circulants.
    """

    def __init__(self, denied_operations: list[str] | None = None):
        """
        Initializes the SpectralOperations class.
        Args:
            denied_operations: A list of tools that should not be registered.
        """
        for operation in denied_operations or []:
            if hasattr(self, operation):
                setattr(self, operation, None)
                logger.info(f"Disabled spectral tool: {operation}")

        super().__init__()

    @mcp_tool()
    async def spectrum(
        self, ctx: Context, connection_set: str, undirected: bool = False, include_eigenvalues: bool = False
    ) -> SpectrumReport:
        """
        Computes the exact spectrum of the circulant cay(Z_n, S).

        Args:
            connection_set: The connection set, formatted like "5: 1,4".
            undirected: Whether the set is inverse-closed (a circulant graph).
            include_eigenvalues: Whether to list the residues of all eigenvalues.

        Returns:
            SpectrumReport: distinct eigenvalue count and the simple/saturated verdicts.
        """
        async with handle_tool_errors(connection_set):
            s = ConnectionSet.parse(connection_set, undirected=undirected)
            rows = eigenvalue_matrix(s).tolist()
            distinct = len({tuple(row) for row in rows})
            report = SpectrumReport(
                connection_set=s.format(),
                distinct_eigenvalues=distinct,
                simple_spectrum=distinct == s.n,
                saturated_spectrum=distinct == saturation_bound(s.n) if s.is_inverse_closed else None,
                eigenvalues=[[int(c) for c in row] for row in rows] if include_eigenvalues else [],
            )
            await ctx.info(f"Spectrum of {s.format()}: {distinct} distinct eigenvalues")
            return report

    @mcp_tool()
    async def walk(self, ctx: Context, connection_set: str, undirected: bool = False) -> WalkReport:
        """
        Computes the walk matrix to vertex 0 of cay(Z_n, S) and its exact rank.

        Args:
            connection_set: The connection set, formatted like "5: 1,4".
            undirected: Whether the set is inverse-closed (a circulant graph).

        Returns:
            WalkReport: rank, distinct rows and the walk-discrete/walk-saturated verdicts.
        """
        async with handle_tool_errors(connection_set):
            s = ConnectionSet.parse(connection_set, undirected=undirected)
            w = walk_matrix(cayley(s), [0])
            distinct = w.distinct_row_count()
            report = WalkReport(
                connection_set=s.format(),
                rank=walk_rank(w),
                distinct_rows=distinct,
                walk_discrete=distinct == s.n,
                walk_saturated=distinct == saturation_bound(s.n) if s.is_inverse_closed else None,
            )
            await ctx.info(f"Walk matrix of {s.format()}: rank {report.rank}")
            return report
