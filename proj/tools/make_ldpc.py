#!/usr/bin/env python3
"""Generate a (3,6)-regular LDPC parity-check matrix in alist format.

Columns get weight 3 and rows weight 6. Edges are placed one column at a time,
always choosing among the least-loaded rows that do not close a 4-cycle with
edges already placed. The script retries with a new seed until the matrix has
full GF(2) rank, so the code rate is exactly 1/2.

    python3 tools/make_ldpc.py --n 648 --seed 1 > data/ldpc_648_r12.alist
"""
import argparse
import random
import sys

import numpy as np


def build(n, col_w, row_w, rng):
    m = n * col_w // row_w
    rows = [set() for _ in range(m)]
    cols = [[] for _ in range(n)]
    for c in range(n):
        for _ in range(col_w):
            # rows reachable in two hops from c; joining any of them closes a 4-cycle
            banned = set(cols[c])
            for r in cols[c]:
                for c2 in rows[r]:
                    banned.update(cols[c2])
            load = min(len(rows[r]) for r in range(m) if r not in banned and len(rows[r]) < row_w) \
                if any(r not in banned and len(rows[r]) < row_w for r in range(m)) else None
            if load is None:
                return None
            choice = [r for r in range(m) if r not in banned and len(rows[r]) == load]
            r = rng.choice(choice)
            rows[r].add(c)
            cols[c].append(r)
    return rows, cols


def gf2_rank(rows, n):
    mat = np.zeros((len(rows), n), dtype=np.uint8)
    for r, cs in enumerate(rows):
        mat[r, list(cs)] = 1
    rank = 0
    for c in range(n):
        pivot = None
        for r in range(rank, mat.shape[0]):
            if mat[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        mat[[rank, pivot]] = mat[[pivot, rank]]
        for r in range(mat.shape[0]):
            if r != rank and mat[r, c]:
                mat[r] ^= mat[rank]
        rank += 1
    return rank


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=648)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    col_w, row_w = 3, 6
    seed = args.seed
    while True:
        built = build(args.n, col_w, row_w, random.Random(seed))
        if built is not None:
            rows, cols = built
            if gf2_rank(rows, args.n) == len(rows):
                break
        seed += 1
    m = len(rows)
    out = sys.stdout
    out.write(f"{args.n} {m}\n{col_w} {row_w}\n")
    out.write(" ".join([str(col_w)] * args.n) + "\n")
    out.write(" ".join([str(row_w)] * m) + "\n")
    for c in range(args.n):
        out.write(" ".join(str(r + 1) for r in sorted(cols[c])) + "\n")
    for r in range(m):
        out.write(" ".join(str(c + 1) for c in sorted(rows[r])) + "\n")
    print(f"seed={seed}", file=sys.stderr)


if __name__ == "__main__":
    main()
