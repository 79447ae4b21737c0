#!/usr/bin/env python3
"""Fetch MNIST and Fashion-MNIST from npm packages and write gzipped IDX subsets.

Writes into data/ (relative to the repository root):
  mnist-train-images-idx3-ubyte.gz / mnist-train-labels-idx1-ubyte.gz  (first 10000 training digits)
  mnist-test-images-idx3-ubyte.gz  / mnist-test-labels-idx1-ubyte.gz   (first 2000 test digits)
  fashion-images-idx3-ubyte.gz     / fashion-labels-idx1-ubyte.gz      (first 200 images of each class)

Pass --full to keep the complete MNIST train/test files instead of the subsets.
"""
import argparse
import gzip
import json
import pathlib
import struct
import subprocess
import tarfile
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def npm_pack(name, workdir):
    out = subprocess.run(["npm", "pack", name], cwd=workdir, check=True,
                         capture_output=True, text=True)
    tgz = workdir / out.stdout.strip().splitlines()[-1]
    with tarfile.open(tgz) as tar:
        tar.extractall(workdir / name)
    return workdir / name / "package"


def write_images(path, images, rows=28, cols=28):
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x803, len(images), rows, cols))
        for img in images:
            f.write(bytes(img))


def write_labels(path, labels):
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def read_idx(path):
    data = path.read_bytes()
    magic, count = struct.unpack(">II", data[:8])
    if magic == 0x803:
        rows, cols = struct.unpack(">II", data[8:16])
        size = rows * cols
        return [data[16 + i * size:16 + (i + 1) * size] for i in range(count)]
    return list(data[8:8 + count])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--fashion-per-class", type=int, default=200)
    args = ap.parse_args()
    out = ROOT / "data"
    out.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        mnist = npm_pack("mnist-data", tmp) / "data"
        n_train = None if args.full else 10000
        n_test = None if args.full else 2000
        for split, n in (("train", n_train), ("test", n_test)):
            prefix = "train" if split == "train" else "t10k"
            imgs = read_idx(mnist / f"{prefix}-images-idx3-ubyte")[:n]
            labels = read_idx(mnist / f"{prefix}-labels-idx1-ubyte")[:n]
            write_images(out / f"mnist-{split}-images-idx3-ubyte.gz", imgs)
            write_labels(out / f"mnist-{split}-labels-idx1-ubyte.gz", labels)

        fashion = npm_pack("fashion-mnist", tmp) / "src" / "clothes"
        imgs, labels = [], []
        for cls in range(10):
            rows = json.loads((fashion / f"{cls}.json").read_text())["data"]
            for row in rows[:args.fashion_per_class]:
                imgs.append(row)
                labels.append(cls)
        write_images(out / "fashion-images-idx3-ubyte.gz", imgs)
        write_labels(out / "fashion-labels-idx1-ubyte.gz", labels)


if __name__ == "__main__":
    main()
