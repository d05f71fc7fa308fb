"""
One-time and probabilistic dynamic settings
===========================================

Edges come and go while the search runs. In the one-time setting a single
change fires and the search gets a quiet window to recover. In the
probabilistic setting every step risks a change with rate p_d, so the run
records a re-optimization span for each change it absorbs.
"""

from dynvc.harness import ExperimentConfig, run_sweep, summarize
from dynvc.dynamics import pd_threshold_classic

# one-time: start from a greedy maximal matching, delete a matched edge at
# step 0 (the adversarial choice), measure evaluations to the next
# certified cover
cfg = ExperimentConfig(family="star", sizes=(128,), problem="classic",
                       algo="ea", setting="onetime", policy="delete_positive",
                       reps=50, seed=1)
rows = summarize(run_sweep(cfg))
print("one-time deletion on a star, 50 runs:")
print("  mean", rows[0]["mean"], "median", rows[0]["median"],
      "reached", rows[0]["reached"])

# probabilistic: the same experiment with background changes at the safe
# rate for this size; each change contributes one span
rate = pd_threshold_classic(128)
print(f"\nbackground change rate for m=128: {rate:.2e}")
cfg = ExperimentConfig(family="path", sizes=(128,), problem="classic",
                       algo="ea", setting="prob", pd="auto_thm2",
                       init="greedy", policy="delete_positive",
                       initial_change=True, reps=50, seed=2)
records = run_sweep(cfg)
spans = [s for r in records for s in r.reopt_spans]
print(f"spans collected: {len(spans)}, mean {sum(spans) / len(spans):.1f} "
      f"evaluations from change to recovery")

# scripted changes replay an exact adversarial schedule (file format:
# "at <t> add|del <u> <v>", strictly increasing t)
import tempfile
from pathlib import Path

from dynvc import Graph, make_instance

g = make_instance("path", 10)
with tempfile.TemporaryDirectory() as tmp:
    graph_file = Path(tmp) / "g.graph"
    graph_file.write_text(g.to_text())
    script = Path(tmp) / "changes.txt"
    script.write_text("at 0 del 5 6\nat 40 del 2 3\nat 80 add 5 6\n")
    cfg = ExperimentConfig(family="file", sizes=(), graph_file=str(graph_file),
                           changes_file=str(script), problem="classic",
                           algo="rls", reps=1, seed=3)
    rec = run_sweep(cfg)[0]
    print(f"\nscripted run: {rec.n_changes} changes, spans {rec.reopt_spans}, "
          f"done at evaluation {rec.steps_to_target}")
    print("final graph edges:", Graph.from_text(rec.final_graph_text).edges())
