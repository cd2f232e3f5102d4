"""Output structure of a single streaming-transducer run.

Every useful variable occurrence (x, i) -- meaning x's content after i
letters survives into the final output -- contributes an in node and an out
node.  Edges carry the literal fragments of the updates, arranged so that
the walk from (x, i, in) to (x, i, out) spells exactly x's content after i
letters.  The construction is only offered for 1-bounded machines; there
the useful nodes form disjoint simple paths and every node has at most one
outgoing edge, which is what makes the walk well defined.
"""

from .sst import FlowCache, NotInDomain, is_1_bounded

IN = "in"
OUT = "out"


def _node_key(node):
    x, i, side = node
    return (i, str(x), 0 if side == IN else 1)


class OutputGraph:
    """Directed graph over (variable, column, side) nodes with string labels."""

    def __init__(self, word, horizon):
        self.word = word
        self.horizon = horizon
        self.nodes = set()
        self.edges = {}

    def add_node(self, node):
        if node not in self.nodes:
            self.nodes.add(node)
            self.edges[node] = {}

    def add_edge(self, u, v, label):
        self.add_node(u)
        self.add_node(v)
        row = self.edges[u]
        if v in row:
            if row[v] != label:
                raise ValueError(
                    "conflicting labels %r and %r on the edge %r -> %r; "
                    "the machine is not 1-bounded on this run"
                    % (row[v], label, u, v)
                )
            return
        row[v] = label

    def out_edges(self, u):
        return self.edges.get(u, {})

    def successor(self, u):
        """The unique edge leaving u, as (target, label)."""
        row = self.edges.get(u, {})
        if len(row) != 1:
            raise ValueError(
                "node %r has %d outgoing edges, expected exactly 1"
                % (u, len(row))
            )
        ((v, label),) = row.items()
        return v, label

    def to_dot(self):
        def nid(node):
            x, i, side = node
            return "%s%s_%d" % (x, side, i)

        lines = ["digraph output_graph {", "  rankdir=LR;"]
        order = sorted(self.nodes, key=_node_key)
        for node in order:
            x, i, side = node
            lines.append('  %s [label="%s,%d,%s"];' % (nid(node), x, i, side))
        for u in order:
            for v in sorted(self.edges[u], key=_node_key):
                label = self.edges[u][v] or "ε"
                lines.append('  %s -> %s [label="%s"];' % (nid(u), nid(v), label))
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_output_graph(t, word, horizon, cache=None):
    """Output graph of t's run on word, truncated after horizon letters.

    Needs a 1-bounded machine (the verdict is computed once and remembered
    on the machine), a word in the domain, and a horizon at least the
    settling column so that the fixed output variables are settled inside
    the graph.
    """
    verdict = getattr(t, "_one_bounded", None)
    if verdict is None:
        verdict = is_1_bounded(t)[0]
        t._one_bounded = verdict
    if not verdict:
        raise ValueError("output graphs are only defined for 1-bounded machines")
    fc = cache if cache is not None else FlowCache(t, word)
    ana = fc.analysis
    if not ana.in_domain:
        raise NotInDomain(ana.infinity)
    if horizon < ana.settle_col:
        raise ValueError(
            "horizon %d is below the settling column %d"
            % (horizon, ana.settle_col)
        )
    g = OutputGraph(word, horizon)
    live = {
        (x, i): fc.useful(x, i)
        for i in range(horizon + 1)
        for x in t.variables
    }
    for x in t.variables:
        if live[(x, 0)]:
            g.add_edge((x, 0, IN), (x, 0, OUT), "")
    for i in range(1, horizon + 1):
        subst = ana.update_at(i)
        for x in t.variables:
            if not live[(x, i)]:
                continue
            rhs = subst[x]
            occ = [v for kind, v in rhs if kind == "var"]
            if not occ:
                g.add_edge(
                    (x, i, IN), (x, i, OUT), "".join(ch for _, ch in rhs)
                )
                continue
            # literal gaps around the variable occurrences:
            # rhs = gaps[0] occ[0] gaps[1] occ[1] ... occ[-1] gaps[-1]
            gaps = [[]]
            for kind, v in rhs:
                if kind == "var":
                    gaps.append([])
                else:
                    gaps[-1].append(v)
            gaps = ["".join(gp) for gp in gaps]
            for v in occ:
                assert live[(v, i - 1)], (
                    "%r feeds useful %r at column %d but is not useful itself"
                    % (v, x, i)
                )
            g.add_edge((x, i, IN), (occ[0], i - 1, IN), gaps[0])
            for n in range(len(occ) - 1):
                g.add_edge(
                    (occ[n], i - 1, OUT), (occ[n + 1], i - 1, IN), gaps[n + 1]
                )
            g.add_edge((occ[-1], i - 1, OUT), (x, i, OUT), gaps[-1])
    return g


def in_out_value(graph, x, i):
    """Concatenated labels along the walk from (x, i, in) to (x, i, out)."""
    start = (x, i, IN)
    target = (x, i, OUT)
    if start not in graph.nodes:
        raise ValueError("(%r, %d) is not a useful pair of this graph" % (x, i))
    parts = []
    node = start
    steps = 0
    while node != target:
        node, label = graph.successor(node)
        parts.append(label)
        steps += 1
        assert steps <= 2 * len(graph.nodes), "walk does not terminate"
    return "".join(parts)
