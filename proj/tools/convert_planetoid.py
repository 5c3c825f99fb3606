#!/usr/bin/env python3
"""Convert published planetoid files (ind.<name>.*) into the plain-text
dataset layout this project loads.

Expects the eight files from the planetoid distribution in --input:
    ind.<name>.x  ind.<name>.y  ind.<name>.tx  ind.<name>.ty
    ind.<name>.allx  ind.<name>.ally  ind.<name>.graph  ind.<name>.test.index

Writes to --output:
    graph.edges features.coo labels.tsv splits.json [links.json]

The split convention follows the common semi-supervised protocol: the first
len(y) nodes are train, the next 500 are validation, and test.index lists
the test nodes. Pass --links to additionally carve an edge split
(5% validation / 10% test positives, matched uniform non-edge negatives).
"""

import argparse
import json
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load_pickle(path: Path):
    with open(path, "rb") as fh:
        return pickle.load(fh, encoding="latin1")


def load_planetoid(input_dir: Path, name: str):
    objs = {
        part: load_pickle(input_dir / f"ind.{name}.{part}")
        for part in ("x", "y", "tx", "ty", "allx", "ally", "graph")
    }
    test_idx = np.loadtxt(input_dir / f"ind.{name}.test.index", dtype=int)
    test_range = np.sort(test_idx)

    features = sp.vstack((sp.csr_matrix(objs["allx"]),
                          sp.csr_matrix(objs["tx"]))).tolil()
    labels = np.vstack((objs["ally"], objs["ty"]))

    if name == "citeseer":
        # Some citeseer test ids are absent from test.index; give the gap
        # rows zero features and no label so ids stay aligned.
        full = np.arange(test_range.min(), test_range.max() + 1)
        fixed_features = sp.lil_matrix((len(full), features.shape[1]))
        fixed_features[test_range - test_range.min(), :] = features[test_range, :]
        features_top = features[: test_range.min(), :]
        features = sp.vstack((features_top, fixed_features)).tolil()
        fixed_labels = np.zeros((len(full), labels.shape[1]), dtype=labels.dtype)
        fixed_labels[test_range - test_range.min(), :] = labels[test_range, :]
        labels = np.vstack((labels[: test_range.min(), :], fixed_labels))
    else:
        features[test_idx, :] = features[test_range, :]
        labels[test_idx, :] = labels[test_range, :]

    n_train = objs["y"].shape[0]
    splits = {
        "train": list(range(n_train)),
        "val": list(range(n_train, n_train + 500)),
        "test": [int(i) for i in test_range],
    }
    return features.tocsr(), labels, objs["graph"], splits


def write_dataset(out_dir: Path, features, labels, graph, splits):
    out_dir.mkdir(parents=True, exist_ok=True)

    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u == v:
                continue
            edges.add((min(u, v), max(u, v)))
    with open(out_dir / "graph.edges", "w") as fh:
        for u, v in sorted(edges):
            fh.write(f"{u}\t{v}\n")

    coo = features.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(out_dir / "features.coo", "w") as fh:
        for k in order:
            fh.write(f"{coo.row[k]},{coo.col[k]},{coo.data[k]:.17g}\n")

    with open(out_dir / "labels.tsv", "w") as fh:
        for node in range(labels.shape[0]):
            row = labels[node]
            if row.sum() == 0:
                continue  # padded citeseer rows stay unlabeled
            fh.write(f"{node}\t{int(np.argmax(row))}\n")

    with open(out_dir / "splits.json", "w") as fh:
        json.dump(splits, fh)

    return sorted(edges), labels.shape[0]


def write_link_split(out_dir: Path, edges, n_nodes, seed):
    rng = np.random.default_rng(seed)
    edges = [tuple(int(x) for x in e) for e in edges]
    perm = rng.permutation(len(edges))
    n_val = len(edges) * 5 // 100
    n_test = len(edges) * 10 // 100
    val = [edges[i] for i in perm[:n_val]]
    test = [edges[i] for i in perm[n_val:n_val + n_test]]
    train = [edges[i] for i in perm[n_val + n_test:]]

    edge_set = set(edges)
    negatives = set()
    while len(negatives) < n_val + n_test:
        u = int(rng.integers(0, n_nodes))
        v = int(rng.integers(0, n_nodes))
        if u == v:
            continue
        pair = (min(u, v), max(u, v))
        if pair in edge_set or pair in negatives:
            continue
        negatives.add(pair)
    negatives = sorted(negatives)
    rng.shuffle(negatives)

    payload = {
        "train_edges": train,
        "val_edges": val,
        "val_neg": negatives[:n_val],
        "test_edges": test,
        "test_neg": negatives[n_val:n_val + n_test],
    }
    with open(out_dir / "links.json", "w") as fh:
        json.dump(payload, fh)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True, type=Path,
                    help="directory holding the ind.<name>.* files")
    ap.add_argument("--dataset", required=True,
                    choices=["cora", "citeseer", "pubmed"])
    ap.add_argument("--output", required=True, type=Path)
    ap.add_argument("--links", action="store_true",
                    help="also write a 5%%/10%% link split")
    ap.add_argument("--links-seed", type=int, default=0)
    args = ap.parse_args()

    features, labels, graph, splits = load_planetoid(args.input, args.dataset)
    edges, n_nodes = write_dataset(args.output, features, labels, graph,
                                   splits)
    if args.links:
        write_link_split(args.output, edges, n_nodes, args.links_seed)
    print(f"{args.dataset}: {n_nodes} nodes, {len(edges)} edges, "
          f"{features.shape[1]} features -> {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
