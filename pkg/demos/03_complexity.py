# %% [markdown]
# # Flop budgets
#
# OIA feedback needs a few Gram-Schmidt passes and matrix products per
# user. The baselines need an SVD per user per candidate transmitter, so
# their cost grows much faster with the user pool.

# %%
from oiasim import psi_max_snr_up, psi_min_inr_up, psi_oia_up, psi_oia_us

K, n_rx = 3, 6
print(f"{'N':>4} {'OIA-US':>10} {'OIA-UP':>10} {'MIN-INR-UP':>12} {'MAX-SNR-UP':>12}  ratio")
for N in (15, 30, 60, 120, 200):
    oia = psi_oia_up(K, N, n_rx)
    inr = psi_min_inr_up(K, N, n_rx)
    print(f"{N:4d} {psi_oia_us(K, N // K, n_rx):10d} {oia:10d} {inr:12d} "
          f"{psi_max_snr_up(K, N, n_rx):12d}  {oia / inr:.3f}")

# %% [markdown]
# The same table is available from the command line:
#
#     oiasim complexity --K 3 --M 3 --users 15,30,60,120,200
