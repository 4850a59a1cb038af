# %% [markdown]
# # The command line pipeline
#
# Each step reads and writes plain files, so the same flow works from a
# shell. Here the entry point is called in-process.

# %%
import tempfile
from pathlib import Path

from causaltree.cli import main
from causaltree.io import reference_model, write_model

work = Path(tempfile.mkdtemp())
write_model(reference_model("h0"), work / "model.json")

main(["simulate", "--model", str(work / "model.json"), "--count", "100",
      "--seed", "1", "--out", str(work / "samples.csv")])
main(["weights", "--model", str(work / "model.json"), "--kind", "di",
      "--out", str(work / "di.csv")])
main(["learn", "--weights", str(work / "di.csv"), "--mode", "causal",
      "--out", str(work / "tree.json"), "--dot", str(work / "tree.dot")])
main(["kl", "--model", str(work / "model.json"), "--tree", str(work / "tree.json")])
main(["count", "--m", "6", "--n", "10"])

print((work / "tree.dot").read_text())
