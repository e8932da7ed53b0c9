"""Paths in oriented windows and the conveyors that ride them.

An orientation gives every state an arrow and marks which local patterns
to trust; trusted, collision-free cells chain into paths.  A second layer
of data then moves along each path like a conveyor loop: the plain variant
rotates the loop, the twisted variant flips the two tracks at the fold,
and the folded-tape re-blocking turns one plain step into two twisted
ones.  A three-state variant rides the enumeration permutations instead
and walks its path through all 27 words.
"""

from catoolkit import (VARIANT_MOBIUS, VARIANT_SHIFT, VARIANT_ZOT,
                       Orientation, PathLayerConfig, apply_hphi,
                       apply_path_ca, classify_cells, extract_paths,
                       loop_word, word_phi)

EAST = Orientation(2, 1, ((1, 0), (0, -1)), frozenset({((0,),)}))
TURNS = Orientation(4, 1, ((1, 0), (0, -1), (-1, 0), (0, 1)),
                    frozenset(((s,),) for s in range(4)))

ROLE_LETTER = {"invalid": ".", "begin": "b", "middle": "m", "end": "e",
               "begin-and-end": "x"}


def show_roles(o, grid, label):
    print(label)
    roles = classify_cells(o, grid)
    for y in range(len(grid)):
        print("  " + "".join(ROLE_LETTER[roles[(x, y)]]
                             for x in range(len(grid[0]))))
    deco = extract_paths(o, grid)
    print(f"  paths: {deco.paths}")
    print(f"  cycles: {deco.cycles}")
    print()


def conveyor_demo():
    grid = ((0, 0, 0),)
    b_row = ((0, 1, 1, 0), (1, 0, 0, 1), (1, 1, 0, 1))
    cfg = PathLayerConfig((3, 1), grid, (b_row,), 2)
    path = extract_paths(EAST, grid).paths[0]
    word = loop_word(cfg, path)
    print("Loop carried by the three-cell path:", word)
    shifted = apply_path_ca(EAST, cfg, VARIANT_SHIFT)
    print("After one plain rotation:   ", loop_word(shifted, path))
    twisted = apply_path_ca(EAST, cfg, VARIANT_MOBIUS)
    print("After one twisted rotation: ", loop_word(twisted, path))
    folded = apply_hphi(EAST, cfg)
    print("Re-blocked by the fold map: ", loop_word(folded, path))
    print("   (same as word_phi:       ", word_phi(word), ")")
    lhs = apply_hphi(EAST, shifted)
    rhs = apply_path_ca(EAST, apply_path_ca(EAST, folded, VARIANT_MOBIUS),
                        VARIANT_MOBIUS)
    print("fold(plain step) == twisted step twice after fold:", lhs == rhs)
    print()


def enumeration_demo():
    grid = ((0, 0, 0),)
    cfg = PathLayerConfig((3, 1), grid, ((0, 0, 0),))
    seen = []
    for _ in range(27):
        seen.append(cfg.b_layer[0])
        cfg = apply_path_ca(EAST, cfg, VARIANT_ZOT)
    print(f"The three-state conveyor visits {len(set(seen))} distinct"
          f" words and returns home: {cfg.b_layer[0] == seen[0]}")
    print("First few:", seen[:6])


if __name__ == "__main__":
    show_roles(EAST, ((0, 0, 0),), "A row of east arrows (b=begin, m=middle, e=end):")
    show_roles(EAST, ((0, 1, 0),), "An untrusted cell splits the row:")
    show_roles(TURNS, ((0, 3), (1, 2)), "Four turning arrows close a cycle:")
    conveyor_demo()
    enumeration_demo()
