"""
MCP Server for canonical labeling, Cayley representations and sampling of circulants.

Graphs are passed either as a connection set ("n: s1,s2,...") or as text in the
``n <n> directed|undirected`` edge-list format.
"""

from logging import getLogger
from typing import Literal

from fastmcp import Context
from fastmcp.contrib.mcp_mixin import MCPMixin, mcp_tool
from pydantic import BaseModel, Field

from circulant_canon.canon import canonize
from circulant_canon.core import ConnectionSet, Digraph, cayley
from circulant_canon.models.errors import InvalidInputError
from circulant_canon.models.results import CanonMode, CanonResult, SampleModel
from circulant_canon.sampling import sample
from circulant_canon.utils.exception_handling import handle_tool_errors
from circulant_canon.wl2 import canonical_cayley_representation

logger = getLogger(__name__)


class CanonReport(BaseModel):
    outcome: Literal["success", "give-up"]
    reason: str | None = Field(default=None, description="Why the algorithm gave up.")
    labeling: list[int] | None = Field(default=None, description="The label of every vertex.")
    digest: str | None = Field(default=None, description="Hex of the row-major adjacency bits of the canonical form.")
    canonical_form: str | None = Field(default=None, description="The canonical form in edge-list text.")
    connection_set: str | None = Field(
        default=None, description="Connection set of the canonical form when it is a circulant."
    )

    @classmethod
    def from_result(cls, result: CanonResult) -> "CanonReport":
        if not result.succeeded:
            return cls(outcome="give-up", reason=result.reason.value)
        form = result.canonical_form
        elements = form.circulant_connection_set()
        return cls(
            outcome="success",
            labeling=list(result.labeling),
            digest=form.digest(),
            canonical_form=form.to_text(),
            connection_set=None if elements is None else f"{form.n}: " + ",".join(str(e) for e in sorted(elements)),
        )


def _read_input(connection_set: str | None, graph_text: str | None, undirected: bool) -> Digraph:
    if (connection_set is None) == (graph_text is None):
        raise InvalidInputError("pass exactly one of connection_set and graph_text", "input")
    if connection_set is not None:
        return cayley(ConnectionSet.parse(connection_set, undirected=undirected))
    return Digraph.from_text(graph_text, "graph_text")


class CanonOperations(MCPMixin):
    """
    This class provides MCP tools to canonize circulants and to draw random ones.
    """

    def __init__(self, denied_operations: list[str] | None = None):
        """
        Initializes the CanonOperations class.
        Args:
            denied_operations: A list of tools that should not be registered.
        """
        for operation in denied_operations or []:
            if hasattr(self, operation):
                setattr(self, operation, None)
                logger.info(f"Disabled canon tool: {operation}")

        super().__init__()

    @mcp_tool()
    async def canonize(
        self,
        ctx: Context,
        connection_set: str | None = None,
        graph_text: str | None = None,
        undirected: bool = False,
        mode: CanonMode = "full",
        seed: int = 0,
    ) -> CanonReport:
        """
        Computes a canonical labeling.

        Args:
            connection_set: The connection set, formatted like "5: 1,4".
            graph_text: Alternatively, the graph in 'n <n> directed|undirected' edge-list text.
            undirected: Whether the connection set is inverse-closed.
            mode: digraph, graph, full, naive or walk.
            seed: Tie-break seed of the naive mode.

        Returns:
            CanonReport: the outcome, the labeling and the canonical form.
        """
        async with handle_tool_errors(connection_set or "graph_text"):
            x = _read_input(connection_set, graph_text, undirected)
            report = CanonReport.from_result(canonize(x, mode, seed))
            await ctx.info(f"Canonization ({mode}) of {x!r}: {report.outcome}")
            return report

    @mcp_tool()
    async def cayley_representation(
        self,
        ctx: Context,
        connection_set: str | None = None,
        graph_text: str | None = None,
        undirected: bool = False,
    ) -> CanonReport:
        """
        Relabels the input as a Cayley (di)graph of Z_n using 2-WL.

        Args:
            connection_set: The connection set, formatted like "5: 1,4".
            graph_text: Alternatively, the graph in 'n <n> directed|undirected' edge-list text.
            undirected: Whether the connection set is inverse-closed.

        Returns:
            CanonReport: the outcome and, on success, the recovered connection set.
        """
        async with handle_tool_errors(connection_set or "graph_text"):
            x = _read_input(connection_set, graph_text, undirected)
            report = CanonReport.from_result(canonical_cayley_representation(x))
            await ctx.info(f"Cayley representation of {x!r}: {report.outcome}")
            return report

    @mcp_tool()
    async def sample(
        self,
        ctx: Context,
        n: int,
        kind: Literal["cayley", "unlabeled", "labeled"] = "cayley",
        directed: bool = True,
        seed: int = 0,
        count: int = 1,
    ) -> list[str]:
        """
        Draws random circulants.

        Args:
            n: The order.
            kind: cayley (uniform connection set), unlabeled (uniform isomorphism class)
                or labeled (uniform graph isomorphic to a circulant).
            directed: Digraphs when true, graphs otherwise.
            seed: The seed; draw i of a seed is always the same.
            count: Number of draws.

        Returns:
            list[str]: connection sets, or edge-list texts for the labeled model.
        """
        async with handle_tool_errors(f"sample n={n}"):
            model = SampleModel(kind=kind, directed=directed, n=n, seed=seed)
            drawn = [sample(model, draw) for draw in range(count)]
            await ctx.info(f"Sampled {count} {kind} circulants of order {n}")
            return [d.format() if isinstance(d, ConnectionSet) else d.to_text() for d in drawn]
