"""Commutators of truncated Toeplitz matrices on the Bergman space of the disc."""
from dbarkoszul import acr_residual, commutator_norm, preset_map, toeplitz_matrix

for N in (4, 8, 12, 16):
    Tz = toeplitz_matrix("z", N)
    holo = commutator_norm(Tz, toeplitz_matrix("z^2", N))
    anti = commutator_norm(Tz, toeplitz_matrix("zbar", N))
    print(f"N = {N:2d}: |[Tz, Tz^2]| = {holo:.1e}, |[Tz, Tzbar]| = {anti:.4f}")

for symbol in ("z^2", "zbar", "|z|^2"):
    rep = acr_residual(preset_map("z"), symbol, 16)
    print(f"g = {symbol:6s}: commutator {rep.commutator_norms[0]:.2e}, "
          f"||T_g(1) - g|| = {rep.tg1_minus_g:.4f}")
