# Functional threshold of offset min-sum as each noise level grows on its own.
# The p_a sweep stays flat; the p_v sweep decreases and then drops to 0 once
# the transition turns smooth.

import numpy as np

from faidlab import NoiseParams, ThresholdConfig, make_decoder, published_lut, threshold_sweep

dec = make_decoder(published_lut("offset-ms"), 5)
cfg = ThresholdConfig(alpha_hi=0.15)

plans = [
    ("p_v", NoiseParams.sp(0.0, 1e-3, 1e-3), np.round(np.arange(0, 0.041, 0.005), 4)),
    ("p_c", NoiseParams.sp(1e-3, 0.0, 1e-3), np.round(np.arange(0, 0.041, 0.005), 4)),
    ("p_a", NoiseParams.sp(1e-3, 1e-3, 0.0), [1e-4, 1e-3, 1e-2, 5e-2]),
]

for axis, fixed, values in plans:
    print(f"\n{axis} sweep (SP)")
    for row in threshold_sweep(dec, axis, fixed, values, cfg):
        print(f"  {row.value:8.4g}  alpha_bar={row.alpha_bar:.5f}  {row.kind.value}")
