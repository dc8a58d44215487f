"""Solve z g1 + (1 - z) g2 = 1 on the disc and inspect the certificates."""
import numpy as np

from dbarkoszul import build_domain, corona_solve, preset_map, relation_defect

domain = build_domain("disc", 1.0, 1 / 64)
res = corona_solve(preset_map("z,1-z"), domain, eps0=1e-3)

print(f"max |z g1 + (1-z) g2 - 1| = {res.identity_residual:.2e}")
for j, (hol, sup) in enumerate(zip(res.holomorphy_residuals, res.sup_norms), 1):
    print(f"g{j}: sup {sup:.4f}, ||dbar g{j}|| = {hol:.2e} (tolerance {res.tolerance:.2e})")
print(f"relation defect against (1, 1): {relation_defect(res, domain):.2e}")

z = domain.z(0)
i = np.argmin(np.abs(z - 0.5))
print(f"g at z = {z.flat[i]:.3f}: {res.g[0].flat[i]:.6f}, {res.g[1].flat[i]:.6f}")
