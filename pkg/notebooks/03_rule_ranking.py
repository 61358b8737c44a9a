# Robustness of the published 7-level rules, and of every valid 3-level rule,
# measured as noiseless threshold minus functional threshold.

from faidlab import CandidateSet, EnsembleSpec, NoiseParams, ThresholdConfig, enumerate_valid_luts, make_alphabet
from faidlab.designer import evaluate_candidates, ranked_csv, sort_records, spearman
from faidlab.tables import all_published

sp, fd = NoiseParams.sp(1e-2), NoiseParams.fd(5e-3)
cfg = ThresholdConfig(alpha_hi=0.15)

published = CandidateSet.of(all_published().values())
records = evaluate_candidates(published, EnsembleSpec(3, 5), sp, fd, cfg)
print(ranked_csv(sort_records(records, "SP")))
print("FD order:", [r.name for r in sort_records(records, "FD")])

# small alphabet: exhaustive, so population statements are possible
small = enumerate_valid_luts(make_alphabet(1))
recs = evaluate_candidates(small, EnsembleSpec(3, 5), NoiseParams.sp(1e-2), NoiseParams.fd(1e-2), ThresholdConfig(max_iter=500))
useful = [r for r in recs if r.noiseless_threshold > 0.01]
print(f"{len(small)} three-level rules, {len(useful)} with a noiseless threshold above 0.01")
for r in sort_records(useful, "SP"):
    print(f"  {r.name}  noiseless={r.noiseless_threshold:.4f}  SP={r.functional_threshold_sp:.4f}  FD={r.functional_threshold_fd:.4f}")
rho = spearman([r.discrepancy_sp for r in useful], [r.discrepancy_fd for r in useful])
print(f"rank correlation of SP and FD discrepancies: {rho:.3f}")
