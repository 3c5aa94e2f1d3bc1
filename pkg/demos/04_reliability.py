"""Reliability statistics: exact binomial intervals and Cohen's kappa.

Clopper-Pearson intervals come from beta-distribution quantiles computed
with an in-package incomplete-beta routine; kappa intervals use the
asymptotic standard error, with a bootstrap alternative.
"""

import random

from tweetsift.eval import clopper_pearson, cohens_kappa

print("Clopper-Pearson 95% intervals")
for successes, trials in [(0, 10), (10, 10), (25, 50), (45, 50), (284, 3202)]:
    low, high = clopper_pearson(successes, trials)
    print(f"  {successes:>4}/{trials:<5} -> [{low:.4f}, {high:.4f}]")
print()

# Two coders agreeing on 70% of items with symmetric marginals.
rater_a = ["x"] * 25 + ["y"] * 25
rater_b = ["x"] * 20 + ["y"] * 5 + ["x"] * 10 + ["y"] * 15
result = cohens_kappa(rater_a, rater_b)
print(f"kappa {result.kappa:.3f} (po {result.po:.2f}, pe {result.pe:.2f}), "
      f"95% CI [{result.ci[0]:.3f}, {result.ci[1]:.3f}]")

boot = cohens_kappa(rater_a, rater_b, method="bootstrap", n_boot=2000, seed=0)
print(f"bootstrap CI            [{boot.ci[0]:.3f}, {boot.ci[1]:.3f}]")

# Independent raters hover at kappa ~ 0 no matter how high raw agreement is.
rng = random.Random(1)
a = [rng.choice("pq") for _ in range(5000)]
b = [rng.choice("pq") for _ in range(5000)]
independent = cohens_kappa(a, b)
print(f"independent raters: po {independent.po:.3f} but kappa {independent.kappa:+.3f}")
