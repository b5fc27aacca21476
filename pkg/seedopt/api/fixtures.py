"""The ten-user supermarket network used as a worked example and test asset.

Users A-J map to node ids 0-9. Total degrees are A=2, B=3, D=2, E=2. Seeding {A, B}
reaches every user at cost 5 and needs 4 steps along B->C->H->I->J; seeding {D, E}
costs 4, finishes in 2 steps and leaves B and G unreached. Probabilities are 1 and
costs equal total degree.
"""
# Import local modules
from seedopt.api.graph import CostModel
from seedopt.api.graph import ProbabilityModel
from seedopt.api.graph import build_graph
from seedopt.constants import COST_DEGREE
from seedopt.constants import PROB_CONSTANT


TOY10_LABELS = ("A", "B", "C", "D", "E", "F", "G", "H", "I", "J")

TOY10_ARCS = (
    ("A", "D"),
    ("B", "C"),
    ("B", "F"),
    ("B", "G"),
    ("C", "A"),
    ("C", "F"),
    ("C", "H"),
    ("D", "C"),
    ("E", "I"),
    ("G", "E"),
    ("H", "I"),
    ("I", "J"),
)

TOY10_HEADER = (
    "# Supermarket example network: users A-J as node ids 0-9.\n"
    "# Degrees A=2 B=3 D=2 E=2; {A,B} covers all in 4 steps via B->C->H->I->J;\n"
    "# {D,E} costs 4, finishes in 2 steps and misses B and G. Use --directed with const:1 probabilities.\n"
)


def toy10_ids(*labels):
    """Map user labels to node ids, e.g. ``toy10_ids("D", "E") == [3, 4]``."""
    return sorted(TOY10_LABELS.index(label) for label in labels)


def toy10_graph():
    """Build the supermarket network with p = 1 and degree costs."""
    sources = [TOY10_LABELS.index(u) for u, _ in TOY10_ARCS]
    targets = [TOY10_LABELS.index(v) for _, v in TOY10_ARCS]
    return build_graph(len(TOY10_LABELS), sources, targets, directed=True,
                       prob_model=ProbabilityModel(PROB_CONSTANT, 1.0), cost_model=CostModel(COST_DEGREE))


def toy10_edge_list():
    """Text of the fixture as a SNAP edge list with a descriptive header."""
    lines = ["%d %d" % (TOY10_LABELS.index(u), TOY10_LABELS.index(v)) for u, v in TOY10_ARCS]
    return TOY10_HEADER + "\n".join(lines) + "\n"
