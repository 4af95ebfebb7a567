"""Local deletion algorithms on regular graphs and pairings.

Simulate locally defined greedy algorithms (independent sets,
dominating sets, cuts, bisections, induced forests) on random regular
graphs, derive the matching differential-equation systems, and compare
trajectories against their fluid limits.
"""

__version__ = "0.1.0"
