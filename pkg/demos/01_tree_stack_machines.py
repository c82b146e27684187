"""A guided tour of tree stack machines.

A tree stack is a rooted labelled tree with a pointer.  A tree stack
automaton drives the pointer around with five instructions while reading
input; restricting how often a vertex may be entered from its parent
carves out exactly the k-multiple-context-free languages.

Run:  python demos/01_tree_stack_machines.py
"""

from tsalab import (
    SearchOptions,
    accepts,
    enumerate_words,
    is_k_restricted,
    render_tree_stack,
    visited_from_below_counts,
)
from tsalab.cli import trace_table
from tsalab.fixtures import abcd_tsa

tsa = abcd_tsa()
print("The four-block machine accepts { a^m b^m c^m d^m }.")
print("Its nine transitions:")
for i, t in enumerate(tsa.delta, 1):
    print(f"  {tsa.transition_display(i - 1):>3}: {t}")

print("\nSearching for a run on aabbccdd (k = 2, accept at the root):")
run = accepts(tsa, "aabbccdd", SearchOptions(k=2))
print(trace_table(run))

print("\nThe run enters each branch vertex from below exactly twice "
      "(once pushing, once climbing back up):")
print(" ", visited_from_below_counts(run))
print("  2-restricted:", is_k_restricted(run, 2))

print("\nFinal tree stack:", render_tree_stack(run.final().ts))

print("\nEverything the machine accepts up to length 8:")
print(" ", sorted(enumerate_words(tsa, 8, SearchOptions(k=2)), key=len))
