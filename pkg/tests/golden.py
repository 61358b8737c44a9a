"""Hand-transcribed entries of the six published rules, channel value -B.

Keys are (m1, m2) in level units; values are the rule output.
"""

SPOTS = {
    "opt": {(-3, 3): -1, (-2, 3): 1, (-1, -1): -2, (0, 0): -1, (0, 1): 0,
            (1, 2): 1, (1, 3): 2, (2, -2): -1, (3, -3): -1, (2, 3): 3},
    "offset-ms": {(-3, 2): -2, (-2, 3): 0, (-1, 0): -2, (0, 0): -1, (0, 1): 0,
                  (1, 3): 1, (2, -1): 0, (2, 3): 2, (3, -3): -1, (3, 3): 3},
    "robust-sp": {(-3, 3): 0, (-3, 2): -2, (-2, 2): -2, (-1, 0): -2, (0, 1): -1,
                  (0, 2): 0, (1, 1): 0, (2, 2): 2, (2, 3): 2, (3, 0): 1},
    "nonrobust-sp": {(-3, 2): -3, (-3, 3): 0, (-2, 2): 0, (-2, 3): 2, (-1, -1): -2,
                     (0, 0): -1, (0, 3): 3, (1, 1): 0, (2, -2): 0, (3, 0): 3},
    "robust-fd": {(-3, 2): -1, (-2, 1): -1, (-2, 3): 2, (-1, 2): 0, (0, 0): -1,
                  (0, 3): 3, (1, -2): -1, (2, -3): -1, (2, 2): 1, (3, -1): 2},
    "nonrobust-fd": {(-3, 1): -2, (-3, 2): -2, (-2, 2): -1, (-1, 1): -1, (0, 1): 0,
                     (1, -3): -2, (1, -2): -2, (2, -3): -2, (2, -1): 0, (3, -3): 0},
}
