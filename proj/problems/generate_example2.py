"""Writes example2.json: the 2x2 transfer matrix realized with one
block per entry, each scaled to unit DC gain from its input, and sampled
with a zero-order hold, Ts = 1 s.

Blocks: 1/(36 s^2 + 6 s + 1) driven by u1 -> (xi', xi); 1/(8 s + 1) driven
by u2; 1/(8 s + 1) driven by u1; 1/(12 s^2 + 3 s + 1) driven by u2 ->
(xi', xi). Numerator gains only enter the output map, which the problem
does not use.
"""
import json
import pathlib

import numpy as np
from scipy.linalg import expm

Ac = np.zeros((6, 6))
Bc = np.zeros((6, 2))
Ac[0, 0], Ac[0, 1], Ac[1, 0], Bc[0, 0] = -1 / 6, -1 / 36, 1.0, 1 / 36
Ac[2, 2], Bc[2, 1] = -1 / 8, 1 / 8
Ac[3, 3], Bc[3, 0] = -1 / 8, 1 / 8
Ac[4, 4], Ac[4, 5], Ac[5, 4], Bc[4, 1] = -1 / 4, -1 / 12, 1.0, 1 / 12

ts = 1.0
aug = np.zeros((8, 8))
aug[:6, :6] = Ac * ts
aug[:6, 6:] = Bc * ts
e = expm(aug)
A, B = e[:6, :6], e[:6, 6:]

doc = {
    "A": A.tolist(),
    "B": B.tolist(),
    "Q": (10.0 * np.eye(6)).tolist(),
    "R": (0.01 * np.eye(2)).tolist(),
    "N": 40,
    "lambda": 1.0,
    "x_bounds": [[-15.0, 15.0]] * 6,
    "u_bounds": [[-3.0, 3.0]] * 2,
    "continuous": {"A": Ac.tolist(), "B": Bc.tolist(), "ts": ts},
}
out = pathlib.Path(__file__).with_name("example2.json")
out.write_text(json.dumps(doc, indent=2) + "\n")
