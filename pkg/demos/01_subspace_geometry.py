# %% [markdown]
# # Interference subspaces on the Grassmannian
#
# A receiver with 2M antennas sees each interferer through a 2M x M
# channel. Only the column span matters for alignment, so each channel is
# reduced to an orthonormal basis: a point on G(M, 2M).

# %%
import numpy as np

from oiasim import (chordal_distance_sq, hermitian_eigs, two_subspace_eigs, orthonormalize,
                    principal_angles, spread_approx, spread_exact, subspace_mean,
                    sum_projectors)
from oiasim.channels import draw_cscg

rng = np.random.default_rng(0)
M = 3
a, b = orthonormalize(draw_cscg((2, 2 * M, M), rng))

# %% [markdown]
# Principal angles and the chordal distance are two views of the same
# singular values; d^2 is the sum of sin^2 of the angles.

# %%
theta = principal_angles(a, b)
print("angles (rad):", np.round(theta, 4))
print("d^2 =", chordal_distance_sq(a, b), " sum sin^2 =", np.sum(np.sin(theta) ** 2))

# %% [markdown]
# For two subspaces the sum of projectors has a closed-form spectrum
# 1 +/- cos(theta_m). Compare it against a numerical eigen-decomposition.

# %%
print("numerical :", np.round(hermitian_eigs(sum_projectors([a, b])), 6))
print("closed form:", np.round(two_subspace_eigs(theta), 6))

# %% [markdown]
# With more interferers, the mean subspace is the dominant eigenspace of
# the projector sum and the spread is what falls outside it. The cheap
# pairwise surrogate is always an upper bound.

# %%
gens = orthonormalize(draw_cscg((4, 2 * M, M), rng))
mean = subspace_mean(gens)
print("objective at mean:", round(mean.objective, 4))
print("exact spread     :", round(float(spread_exact(gens)), 4))
print("pairwise bound   :", round(float(spread_approx(gens)), 4))

# %% [markdown]
# Aligned interferers share one span, so both measures collapse to zero.

# %%
base = draw_cscg((2 * M, M), rng)
aligned = orthonormalize(base @ draw_cscg((4, M, M), rng))
print("aligned: exact", float(spread_exact(aligned)), "bound", float(spread_approx(aligned)))
