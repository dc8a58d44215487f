"""Least-squares distance to spans of z^a conj(f)^b as the degree grows."""
from dbarkoszul import lp_density_residual, preset_map, symbol_from_name

disc = lp_density_residual(preset_map("z"), symbol_from_name("bump"), 12)
print("disc, f = z, bump field")
for d, r in zip(disc.degrees, disc.relative()):
    print(f"  degree {d:2d}: relative residual {r:.4f}")

bi = lp_density_residual(preset_map("z1"), symbol_from_name("z2bar(1+z1)+|z1|^2"), 10)
print("bidisc, f = (z1): the conj(z2) part is never reached")
for d, r in zip(bi.degrees, bi.residuals):
    print(f"  degree {d:2d}: residual {r:.4f}")
