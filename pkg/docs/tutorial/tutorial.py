# %% [markdown]
# # Tutorial

# %%
import numpy as np
import metroStretch as ms
ms.__version__

# %% [markdown]
# ## Channels and their Choi matrices
# Discrete-variable channels are built by name. The Choi matrix is the output of the
# channel acting on half of a maximally entangled pair, ordered as (output, ancilla).

# %%
channel = ms.make_channel('erasure', 0.25)
choi_state = ms.choi(channel)
choi_state.dim, choi_state.purity()

# %% [markdown]
# ## Simulation by teleportation
# Erasure, dephasing and depolarizing channels are teleportation covariant, so
# teleporting any input over their Choi matrix, followed by the Pauli corrections,
# reproduces the channel output exactly.

# %%
from metroStretch.channel_tools import pauli_table, verify_tele_covariance
from metroStretch.teleport_tools import simulate_and_compare

table = pauli_table(channel.out_dim)
verify_tele_covariance(channel, table), simulate_and_compare(channel, table, trials=50, seed=1)

# %% [markdown]
# ## Quantum Fisher information
# The QFI of the Choi family bounds every adaptive protocol: after n uses the
# variance of any unbiased estimator is at least 1 / (n QFI). Two numerical routes,
# the symmetric logarithmic derivative and the fidelity, agree with the closed form.

# %%
from metroStretch.metrology_tools import closed_form_dv_qfi, qcrb

family = ms.ParamFamilyDV('erasure')
ms.qfi_sld(family, 0.25), ms.qfi_fidelity(family, 0.25), closed_form_dv_qfi('erasure', 0.25)

# %% [markdown]
# ## Block estimation
# Measuring each output pair in the Bell basis saturates the bound at the standard
# quantum limit.

# %%
from metroStretch.estimation_tools import run_block_experiment, sql_scaling_fit

results = [run_block_experiment('erasure', 0.25, n, trials=200, seed=n) for n in (100, 1000, 10000)]
[(r.n, r.empirical_var, r.qcrb) for r in results], sql_scaling_fit(results)

# %% [markdown]
# ## Gaussian channels
# Phase-insensitive Gaussian channels map the covariance matrix as V -> eta V + nu I.
# Their QFI in the thermal photon number is computed on finite-squeezing Choi states
# and extrapolated to infinite squeezing.

# %%
from metroStretch.gaussian_tools import qfi_choi_limit, qfi_suboptimal, finite_resource, bk_teleport_channel

report = qfi_choi_limit('thermal_loss', 1.0, [1, 2, 3], eta=0.6)
report.values, report.value

# %% [markdown]
# A finite-energy resource simulates the same channel exactly through BK teleportation
# with gain sqrt(eta), at the price of a weaker bound: its QFI is nbar^-2 instead of
# [nbar (nbar + 1)]^-1.

# %%
resource = finite_resource(0.6, 0.4 * 1.5)
bk = bk_teleport_channel(resource, np.sqrt(0.6))
bk.T, bk.N, qfi_suboptimal('thermal_loss', 1.0, eta=0.6).value
