"""Approximate 1 - |z|^2 by holomorphic corrections glued over the image of f = z.

A coarse run (h = 1/32, eps = 0.3) that finishes in seconds; the CLI
``dbarkoszul approximate`` runs the full-size case.
"""
from dbarkoszul import TARGETS, approximate, build_domain, preset_map

domain = build_domain("disc", 1.0, 1 / 32)
a = approximate(preset_map("z"), TARGETS["1-|z|^2"], 0.3, domain)
print(f"{len(a.net)} centres, max M = {a.net.M.max():.3f}")
print(f"sup error on the 2x grid: {a.error:.4f} (bound 2 eps = 0.6)")
print(f"model term {a.model_term:.4f}, smoothing term {a.smoothing_term:.4f}")
