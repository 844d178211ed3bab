"""Sweep the first-derivative step and print the alpha route residuals on g3-cartan.

Shows where truncation error gives way to round-off."""
import numpy as np

from isogeo.identities import alpha_route_check
from isogeo.models import registry_get
from isogeo.models.geometry import jet, sample_points
from isogeo.numkit import StepPolicy


def main():
    spec = registry_get("g3-cartan")
    jets = [jet(spec, p) for p in sample_points(spec, 3, seed=0)]
    for h in np.logspace(-7, -3, 9):
        policy = StepPolicy(base_step=float(h))
        worst = max(max(r.value for r in alpha_route_check(j, policy)[1]) for j in jets)
        print(f"h = {h:.1e}   lift vs connection {worst:.2e}")


if __name__ == "__main__":
    main()
