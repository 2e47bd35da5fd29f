"""Two-state cellular automata on {p,3} hyperbolic tilings.

The automaton lives on the tiling of the hyperbolic plane by regular p-gons
meeting three around a vertex (p >= 7).  Cells carry one of two states, W or
B, and rules are rotation invariant: a rule is a word over {W, B} giving the
cell's state, its p neighbour states read in cyclic order, and the new state.

Subpackages by concern:

  tiling    cell coordinates, neighbourhoods, finite balls of the tiling
  rulecore  rules, rotation canonicalisation, rule tables, the rules file
  genrules  rule generators for the railway families at general p
  engine    synchronous updates over tracked regions and tiling balls
  circuits  railway circuit templates (tracks, crossings, switches), scenarios
  render    Poincare-disk layouts and SVG output
  cli       command-line entry point
"""

__version__ = "0.1.0"
