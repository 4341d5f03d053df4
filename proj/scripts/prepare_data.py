#!/usr/bin/env python3
# Copyright 2026 The qsnn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the files under data/ from locally installed packages.

Sources (all offline once the packages are present):
  iris, wine  scikit-learn's bundled copies of the UCI files
  zoo         Orange3 wheel (Orange/datasets/zoo.tab), UCI zoo
  mnist       npm package `mnist` (10k MNIST digits as JSON), written as
              IDX files restricted to digits 0..4

Usage:
  prepare_data.py --orange-wheel orange3-*.whl --mnist-pkg path/to/package
"""

import argparse
import gzip
import json
import os
import struct
import zipfile

import sklearn

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data")


def convert_sklearn(name, src, columns):
    path = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data", src)
    with open(path) as f:
        header = f.readline().strip().split(",")
        classes = header[2:]
        rows = [line.strip().split(",") for line in f if line.strip()]
    with open(os.path.join(OUT, name + ".csv"), "w") as f:
        f.write(",".join(columns + ["class"]) + "\n")
        for r in rows:
            f.write(",".join(r[:-1] + [classes[int(r[-1])]]) + "\n")


def convert_zoo(wheel):
    raw = zipfile.ZipFile(wheel).read("Orange/datasets/zoo.tab").decode()
    lines = raw.splitlines()
    names = lines[0].split("\t")
    with open(os.path.join(OUT, "zoo.csv"), "w") as f:
        f.write(",".join(names[1:-1] + ["class"]) + "\n")
        for line in lines[3:]:
            if not line.strip():
                continue
            cells = line.split("\t")
            f.write(",".join(cells[1:]) + "\n")


def convert_mnist(pkg):
    images, labels = [], []
    for digit in range(5):
        with open(os.path.join(pkg, "src", "digits", f"{digit}.json")) as f:
            data = json.load(f)["data"]
        count = len(data) // 784
        for i in range(count):
            px = data[i * 784:(i + 1) * 784]
            images.append(bytes(min(255, int(round(v * 255))) for v in px))
            labels.append(digit)
    with gzip.open(os.path.join(OUT, "mnist04-images-idx3-ubyte.gz"), "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(img)
    with gzip.open(os.path.join(OUT, "mnist04-labels-idx1-ubyte.gz"), "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--orange-wheel", required=True)
    ap.add_argument("--mnist-pkg", required=True)
    args = ap.parse_args()
    os.makedirs(OUT, exist_ok=True)
    convert_sklearn("iris", "iris.csv",
                    ["sepal_length", "sepal_width", "petal_length", "petal_width"])
    convert_sklearn("wine", "wine_data.csv",
                    ["alcohol", "malic_acid", "ash", "alcalinity_of_ash", "magnesium",
                     "total_phenols", "flavanoids", "nonflavanoid_phenols",
                     "proanthocyanins", "color_intensity", "hue",
                     "od280_od315", "proline"])
    convert_zoo(args.orange_wheel)
    convert_mnist(args.mnist_pkg)


if __name__ == "__main__":
    main()
