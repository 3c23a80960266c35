#!/usr/bin/env python3
"""Regenerates the bundled synthetic LIBSVM fixtures under data/.

The committed files are the contract; rerun this only when changing the
fixtures on purpose.
"""
import os
import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "data")


def write_libsvm(path, labels, rows):
    with open(path, "w") as f:
        for label, row in zip(labels, rows):
            items = " ".join(f"{i + 1}:{v:g}" for i, v in row if v != 0)
            f.write(f"{label:g} {items}\n")


def two_gaussians(rng, n, dim, spread):
    """Well-separated 2-class problem; linearly separable at spread >= 4."""
    labels, rows = [], []
    for _ in range(n):
        cls = int(rng.random() < 0.5)
        center = spread if cls else -spread
        x = center + rng.standard_normal(dim)
        labels.append(cls)
        rows.append([(i, round(v, 4)) for i, v in enumerate(x)])
    return labels, rows


def digits_like(rng, n, protos, dim=16, classes=3):
    """Pendigits-flavored integer features in [0, 100], moderate difficulty.

    Class prototypes are passed in so the train and test splits are drawn
    from the same distribution.
    """
    labels, rows = [], []
    for _ in range(n):
        cls = int(rng.integers(classes))
        x = protos[cls] + rng.integers(-25, 26, size=dim)
        x = np.clip(x, 0, 100)
        keep = rng.random(dim) > 0.2  # some sparsity
        labels.append(cls)
        rows.append([(i, int(v)) for i, v in enumerate(x) if keep[i] and v != 0])
    return labels, rows


def big_values(rng, n, dim=12):
    """Integer magnitudes up to 1e6; u^p overflows doubles long before p=80."""
    labels, rows = [], []
    for _ in range(n):
        nnz = rng.integers(4, dim + 1)
        idx = sorted(rng.choice(dim, size=nnz, replace=False))
        labels.append(int(rng.integers(2)))
        rows.append([(int(i), int(10 ** rng.uniform(0, 6))) for i in idx])
    return labels, rows


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = np.random.default_rng(20240817)

    labels, rows = two_gaussians(rng, 200, dim=10, spread=4.0)
    write_libsvm(os.path.join(OUT, "toy_train.libsvm"), labels, rows)
    labels, rows = two_gaussians(rng, 200, dim=10, spread=4.0)
    write_libsvm(os.path.join(OUT, "toy_test.libsvm"), labels, rows)

    protos = rng.integers(10, 90, size=(3, 16))
    labels, rows = digits_like(rng, 400, protos)
    write_libsvm(os.path.join(OUT, "digits_train.libsvm"), labels, rows)
    labels, rows = digits_like(rng, 400, protos)
    write_libsvm(os.path.join(OUT, "digits_test.libsvm"), labels, rows)

    labels, rows = big_values(rng, 20)
    write_libsvm(os.path.join(OUT, "bigvals.libsvm"), labels, rows)
    print("fixtures written to", OUT)


if __name__ == "__main__":
    main()
