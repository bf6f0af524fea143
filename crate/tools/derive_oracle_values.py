"""Independent recomputation of the values frozen in the Rust test suites.

Plain Python, no shared code with the crate. Run: python3 tools/derive_oracle_values.py
"""
from itertools import product


def free_reduce_naive(word):
    """Delete the first adjacent inverse pair until none is left."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            (g, e), (h, f) = w[i], w[i + 1]
            if g == h and e == -f:
                del w[i:i + 2]
                changed = True
                break
    return w


def r3_instances(lo, hi):
    """Unordered non-degenerate t(i) t(i-1) = t(j) t(j-1) inside [lo, hi]."""
    out = set()
    for i in range(lo - 2, hi + 3):
        for j in range(lo - 2, hi + 3):
            if i == j:
                continue
            idx = [i, i - 1, j, j - 1]
            if all(lo <= k <= hi for k in idx):
                out.add(tuple(sorted([(i, i - 1), (j, j - 1)])))
    return sorted(out)


def r3_class(word, lo, hi):
    rels = r3_instances(lo, hi)
    seen, todo = {word}, [word]
    while todo:
        w = todo.pop()
        for a, b in rels:
            for x, y in ((a, b), (b, a)):
                for p in range(len(w) - 1):
                    if w[p:p + 2] == x:
                        n = w[:p] + y + w[p + 2:]
                        if n not in seen:
                            seen.add(n)
                            todo.append(n)
    return sorted(seen)


def triple_count(n_finite, t_bound):
    gens = [("s", k) for k in range(n_finite)] + [("t", k) for k in range(2 * t_bound + 1)]
    count = 0
    for tr in product(gens, repeat=3):
        ts = [k for f, k in tr if f == "t"]
        if not ts or min(ts) == 0:
            count += 1
    return count


def t_expr(i):
    if i >= 1:
        flank = [(1 - k % 2, 1) for k in range(i - 1)]
    else:
        flank = [(k % 2, -1) for k in range(-i)]
    inv = [(g, -e) for g, e in reversed(flank)]
    return flank + [(i % 2, 1)] + inv


def shi_a2_first_letter_pairs():
    # relations of the Shi presentation with r3 and t0, t1 only (n = 3)
    rels = [
        (["r3", "t0", "r3"], ["t0", "r3", "t0"]),
        (["r3", "t1", "r3"], ["t1", "r3", "t1"]),
        (["r3", "t1", "t0", "r3", "t1", "t0"], ["t1", "t0", "r3", "t1", "t0", "r3"]),
    ]
    return sorted({(a[0], b[0]) for a, b in rels} | {(b[0], a[0]) for a, b in rels})


if __name__ == "__main__":
    w = [(1, 1), (0, 1), (1, 1), (0, -1), (1, -1), (1, 1), (0, 1), (1, -1)]
    print("free_reduce i=3 instance:", free_reduce_naive(w))
    print("R3 instances in window 1:", r3_instances(-1, 1))
    print("class of t1 t0 in window 2:", r3_class((1, 0), -2, 2))
    for name, n in [("d4", 4), ("e6", 6), ("e7", 7), ("e8", 8)]:
        print(f"{name} triples t_bound=0:", triple_count(n, 0), "t_bound=3:", triple_count(n, 3))
    print("t expressions:", {i: t_expr(i) for i in (-2, -1, 2, 3)})
    print("product t3 t2:", free_reduce_naive(t_expr(3) + t_expr(2)))
    print("products hold on [-6, 6]:",
          all(free_reduce_naive(t_expr(i) + t_expr(i - 1)) == [(1, 1), (0, 1)] for i in range(-6, 7)))
    print("Shi A2 leading-letter pairs:", shi_a2_first_letter_pairs())
