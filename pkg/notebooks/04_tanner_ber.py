# Bit error rate on the (155,93) Tanner code with faulty decoders.
# 2000 frames per point keeps this to a few minutes; the acceptance suite
# uses 1e5.

from faidlab import NoiseParams, TrialConfig, make_decoder, published_lut, tanner_code
from faidlab.sim import ber_csv, ber_sweep

code = tanner_code()
alphas = [0.01, 0.02, 0.03, 0.04, 0.05]
trials = 2000

sp = TrialConfig(alpha=0.0, noise=NoiseParams.sp(0.05), seed=1)
fd = TrialConfig(alpha=0.0, noise=NoiseParams.fd(0.02), seed=1)
decs = {n: make_decoder(published_lut(n), 5) for n in ("opt", "robust-sp", "nonrobust-sp", "robust-fd", "nonrobust-fd")}

rows = ber_sweep(code, [decs["opt"], decs["robust-sp"], decs["nonrobust-sp"]], sp, alphas, trials)
rows += ber_sweep(code, [decs["robust-sp"], decs["robust-fd"], decs["nonrobust-fd"]], fd, alphas, trials)
print(ber_csv(rows))

# average decoding iterations shows where the decoder struggles
for r in rows:
    res = r.result
    print(f"# {r.decoder:13s} {r.cfg.noise.model_kind.value} alpha={r.cfg.alpha}: {res.iterations / res.trials:5.1f} iterations/frame")
