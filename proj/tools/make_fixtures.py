#!/usr/bin/env python3
"""Regenerates the graph fixtures under tests/data.

Sporadic graphs whose vertex order matters for the bundled certificate
tests (Hoffman, crossing number graph 6B) are rebuilt from small integer
eigenvectors: we search for the unique (up to the listed checks) regular
graph for which those vectors are Laplacian eigenvectors.
"""
import itertools
import json
import os
import sys

import networkx as nx
import numpy as np

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "data")


def dump(name, n, edges, note):
    edges = sorted(sorted((int(a), int(b))) for a, b in edges)
    with open(os.path.join(OUT, name + ".json"), "w") as f:
        json.dump({"name": name, "note": note, "n": n, "edges": edges}, f)
        f.write("\n")


def circulant(n, gens):
    e = set()
    for v in range(n):
        for s in gens:
            a, b = v, (v + s) % n
            e.add((min(a, b), max(a, b)))
    return sorted(e)


def from_eigvecs(vecs, n, degree, value, fixed_pairs=()):
    """Backtracks over regular graphs with L u = value * u for every u."""
    u = np.array(vecs).T
    opts = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        opts.append([frozenset(c) for c in itertools.combinations(others, degree)
                     if np.all(u[list(c)].sum(0) == (degree - value) * u[i])])
    order = sorted(range(n), key=lambda i: len(opts[i]))
    adj = [frozenset()] * n
    out = []

    def bt(k):
        if k == n:
            out.append(list(adj))
            return
        i = order[k]
        for c in opts[i]:
            if all((i in adj[order[q]]) == (order[q] in c) for q in range(k)):
                adj[i] = c
                bt(k + 1)
                adj[i] = frozenset()

    bt(0)
    graphs = []
    for a in out:
        g = nx.Graph([(i, j) for i in range(n) for j in a[i] if i < j])
        if all(g.has_edge(*p) for p in fixed_pairs):
            graphs.append(g)
    return graphs


def multiplicity(g, n, value):
    lap = nx.laplacian_matrix(g, nodelist=range(n)).toarray().astype(float)
    return int(np.sum(np.abs(np.linalg.eigvalsh(lap) - value) < 1e-8))


def hoffman():
    u = [[-1, 1, -1, -1, -1, 1, 1, 1, 0, 0, 0, -2, 2, 0, 0, 0],
         [-1, -1, 1, 1, -1, 1, 1, -1, 0, 0, -2, 0, 0, 2, 0, 0],
         [-1, -1, 1, -1, 1, 1, -1, 1, 0, -2, 0, 0, 0, 0, 2, 0],
         [-1, -1, -1, 1, 1, -1, 1, 1, -2, 0, 0, 0, 0, 0, 0, 2]]
    gs = [g for g in from_eigvecs(u, 16, 4, 2, fixed_pairs=[(0, 8), (0, 9)])
          if multiplicity(g, 16, 2) == 4]
    assert len(gs) == 1
    return list(gs[0].edges())


def cng6b():
    u = [[0, 0, 4, -3, 1, -3, 1, 1, 1, -2, 2, -1, -1, -1, -1, -4, 3, 3, 0, 0],
         [0, -3, -1, 0, 2, 0, 2, -1, -1, 2, -2, 1, 1, -2, -2, 1, 0, 0, 3, 0],
         [-3, 0, -1, 0, -1, 0, -1, 2, 2, 2, -2, -2, -2, 1, 1, 1, 0, 0, 0, 3]]
    gs = [g for g in from_eigvecs(u, 20, 3, 1) if multiplicity(g, 20, 1) == 3
          and multiplicity(g, 20, 6) == 1]
    assert gs
    return list(gs[0].edges())


def klein_distance2():
    p = 7

    def mul(a, b):
        return ((a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
                (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p)

    def canon(a):
        return min(a, tuple((-x) % p for x in a))

    ident = canon((1, 0, 0, 1))
    els = sorted({canon(m) for m in itertools.product(range(p), repeat=4)
                  if (m[0] * m[3] - m[1] * m[2]) % p == 1})

    def order(a):
        k, b = 1, a
        while b != ident:
            b, k = canon(mul(b, a)), k + 1
        return k

    def closure(gens):
        seen, frontier = {ident}, [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = canon(mul(x, g))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    # (2,3,7) generators of PSL(2,7): rotation a about a vertex of the Klein
    # map, half-turn b about an incident edge.
    a, b = next((a, b) for a in els if order(a) == 7 for b in els
                if order(b) == 2 and order(canon(mul(a, b))) == 3
                and len(closure([a, b])) == 168)
    stab = [ident]
    x = a
    while x != ident:
        stab.append(x)
        x = canon(mul(x, a))
    cosets = {}

    def coset(g):
        key = frozenset(canon(mul(g, h)) for h in stab)
        if key not in cosets:
            cosets[key] = len(cosets)
        return cosets[key]

    for g in els:
        coset(g)
    klein = nx.Graph()
    for g in els:
        for h in stab:
            nb = canon(mul(canon(mul(g, h)), b))
            if coset(g) != coset(nb):
                klein.add_edge(coset(g), coset(nb))
    assert klein.number_of_nodes() == 24 and klein.number_of_edges() == 84
    dist = dict(nx.all_pairs_shortest_path_length(klein))
    return [(u, v) for u in range(24) for v in range(u + 1, 24) if dist[u][v] == 2]


def haar(code):
    bits = [i for i in range(code.bit_length()) if code >> i & 1]
    k = code.bit_length()
    return 2 * k, [(i, k + (i + j) % k) for i in range(k) for j in bits]


def main():
    os.makedirs(OUT, exist_ok=True)
    dump("k2", 2, [(0, 1)], "single edge")
    dump("c4", 4, [(0, 1), (1, 2), (2, 3), (0, 3)], "4-cycle, edges 12,23,34,14 re-indexed from 0")
    dump("k4", 4, list(itertools.combinations(range(4), 2)), "complete graph K4")
    dump("k5", 5, list(itertools.combinations(range(5), 2)), "complete graph K5")
    c6 = [(i, (i + 1) % 6) for i in range(6)]
    dump("c6", 6, c6, "6-cycle")
    c6c = [e for e in itertools.combinations(range(6), 2)
           if (e[1] - e[0]) % 6 not in (1, 5)]
    dump("c6_complement", 6, c6c, "complement of the 6-cycle (triangular prism relabelled)")
    dump("prism", 6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
         "triangular prism: triangles 012 and 345 joined by a matching")
    pet = nx.petersen_graph()
    dump("petersen", 10, pet.edges(), "Petersen graph (networkx labelling)")
    shr = [((x1, y1), (x2, y2)) for x1, y1, x2, y2 in itertools.product(range(4), repeat=4)
           if ((x2 - x1) % 4, (y2 - y1) % 4) in {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}]
    lab = lambda v: 4 * v[0] + v[1]
    shr_edges = {tuple(sorted((lab(a), lab(b)))) for a, b in shr}
    comp = [e for e in itertools.combinations(range(16), 2) if e not in shr_edges]
    dump("shrikhande_complement", 16, comp,
         "complement of the Shrikhande graph Cay(Z4xZ4, {+-(1,0), +-(0,1), +-(1,1)})")
    dump("hoffman", 16, hoffman(),
         "Hoffman graph; vertex order chosen so E_2 has a 0,+-1 basis and E_8 contains (-1^8, 1^8)")
    dump("c18_1_5", 18, circulant(18, [1, 5]), "circulant C18({1,5})")
    n, e = haar(565)
    dump("haar565", n, e, "Haar graph H(565): u_i ~ v_{i+j} for the set bits j of 565")
    dump("cng6b", 20, cng6b(),
         "crossing number graph 6B; vertex order chosen so E_1 has a small integer basis")
    dump("klein_distance2", 24, klein_distance2(),
         "distance-2 graph of the 7-regular Klein graph (coset graph of PSL(2,7))")
    rigid21 = [(1, 6), (1, 8), (2, 5), (2, 9), (3, 4), (3, 10), (4, 10), (5, 9), (6, 8), (10, 11)]
    for a, b in rigid21:
        dump(f"c21_{a}_{b}", 21, circulant(21, [a, b]), f"circulant C21({{{a},{b}}})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
