"""Regenerate the small worked-example graphs under src/pcnroute/fixtures/."""
import json
from pathlib import Path

from pcnroute.generators import gen_hub_spoke
from pcnroute.graph import ArcPolicy, build_graph
from pcnroute.ingest import dump_snapshot
from pcnroute.search import apply_source_fee_zero

OUT = Path(__file__).resolve().parents[1] / "src" / "pcnroute" / "fixtures"
AMPLE = 1_000_000


def write(name, doc):
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write("fig1", dump_snapshot(build_graph([("v_i", "v_j", ArcPolicy(2, 0.1, 20))])))
    write("fig2", dump_snapshot(build_graph([
        ("v_i", "v_k", ArcPolicy(1, 0.01, 100)),
        ("v_k", "v_j", ArcPolicy(1, 0.01, 100)),
    ])))
    fig3 = build_graph([
        ("s", "i", ArcPolicy(2, 0.2, AMPLE)),
        ("s", "j", ArcPolicy(2, 0.1, AMPLE)),
        ("i", "t", ArcPolicy(2, 0.1, AMPLE)),
        ("j", "t", ArcPolicy(15, 0.5, AMPLE)),
    ])
    write("fig3", dump_snapshot(fig3))
    # payment-direction arcs whose transposes are (t,i), (i,j), (j,s), (t,j)
    fig4 = build_graph([
        ("i", "t", ArcPolicy(0, 0, AMPLE)),
        ("j", "i", ArcPolicy(0, 0, AMPLE)),
        ("s", "j", ArcPolicy(0, 0, AMPLE)),
        ("j", "t", ArcPolicy(0, 0, AMPLE)),
    ], vertices=["s", "i", "j", "t"])
    write("fig4", dump_snapshot(fig4))
    write("fig4_fees", [
        {"arc": ["i", "t"], "amount": 100, "fee": 10},
        {"arc": ["j", "i"], "amount": 110, "fee": 10},
        {"arc": ["s", "j"], "amount": 120, "fee": 5},
        {"arc": ["j", "t"], "amount": 100, "fee": 10},
        {"arc": ["s", "j"], "amount": 110, "fee": 20},
    ])
    write("fig5", dump_snapshot(gen_hub_spoke(12, ArcPolicy(1, 0.001, 5 * AMPLE))))
    write("fig6", dump_snapshot(apply_source_fee_zero(fig3, fig3.vertex("s"))))


if __name__ == "__main__":
    main()
