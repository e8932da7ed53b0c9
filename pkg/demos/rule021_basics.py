"""Tour of the three-state conveyor rule: simulation, inversion, graph SFT.

The rule reads a cell and its right neighbour and permutes the cell by one
of three fixed permutations, selected by the neighbour.  Despite reading
only to the right it has a one-sided inverse of the same radius, found here
by exhaustive search.
"""

from catoolkit import (compose, equal_ca, family_from_rule, graph_subshift,
                       identity_rule, invert_up_to_radius, iterate,
                       render_spacetime, rule_021, window1d)


def show_orbit():
    print("A 9-cell periodic window, 12 steps (time runs downwards):")
    diagram = iterate(rule_021(), window1d("001200120"), 12)
    print(render_spacetime(diagram).decode())


def show_inverse():
    z = rule_021()
    inv = invert_up_to_radius(z, 1)
    fam = family_from_rule(inv)
    print("The radius-1 inverse, as neighbour-selected permutations:")
    for a, perm in enumerate(fam.perms):
        print(f"  neighbour {a}: {perm}")
    both = (equal_ca(compose(inv, z), identity_rule(3))
            and equal_ca(compose(z, inv), identity_rule(3)))
    print(f"Composes to the identity in both orders: {both}")
    print()


def show_graph_subshift():
    sft = graph_subshift(rule_021())
    print("Graph subshift of (configuration, image) pairs:")
    print(f"  window width {sft.width}, anchored at {sft.anchor}")
    print(f"  {len(sft.forbidden)} of 81 two-cell pair blocks are forbidden")
    word = (0, 0, 1, 2, 0, 0)
    z = rule_021()
    image = tuple(z.table[(word[i], word[i + 1])]
                  for i in range(len(word) - 1))
    print(f"  admits the orbit pair {word} -> {image}:",
          sft.admits(list(zip(word, image))))


if __name__ == "__main__":
    show_orbit()
    show_inverse()
    show_graph_subshift()
