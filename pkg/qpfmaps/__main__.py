# qpfmaps: numerical analysis of quasi-periodically forced monotone
# interval maps, their invariant graphs and their saddle-node bifurcations.
#
# `python -m qpfmaps` runs the same entry point as `qpfmaps-cli`.
from qpfmaps.core.cli import main

if __name__ == "__main__":
    main()
