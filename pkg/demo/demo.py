import os
print(os.getcwd())

import sys
sys.path.append('src/')
import numpy as np
import metroStretch as ms
from metroStretch.channel_tools import pauli_table
from metroStretch.teleport_tools import simulate_and_compare
from metroStretch.metrology_tools import closed_form_dv_qfi, qcrb
from metroStretch.gaussian_tools import finite_resource, bk_teleport_channel, qfi_choi_limit, bk_error_lower_bound
from metroStretch.estimation_tools import run_block_experiment, sql_scaling_fit

# dephasing channel and its Choi matrix
channel = ms.make_channel('dephasing', 0.3)
choi_state = ms.choi(channel)

# teleporting over the Choi matrix simulates the channel exactly
dev = simulate_and_compare(channel, pauli_table(2), trials=100, seed=0)
print(f"teleportation simulation deviation: {dev:.2e}")

# QFI of the Choi family by two routes
family = ms.ParamFamilyDV('dephasing')
print(ms.qfi_sld(family, 0.3), ms.qfi_fidelity(family, 0.3), closed_form_dv_qfi('dephasing', 0.3))
print(f"QCRB for 1000 uses: {qcrb(closed_form_dv_qfi('dephasing', 0.3), 1000):.3e}")

# the block protocol saturates it
results = [run_block_experiment('dephasing', 0.3, n, trials=200, seed=n) for n in (100, 1000, 10000)]
for res in results:
    print(f"n={res.n}: variance {res.empirical_var:.3e}, QCRB {res.qcrb:.3e}")
print(f"scaling slope: {sql_scaling_fit(results):.3f}")

# finite-energy resource of a thermal-loss channel, eta = 0.6, nbar = 1
eta, nu = 0.6, 0.4 * 1.5
resource = finite_resource(eta, nu)
bk = bk_teleport_channel(resource, np.sqrt(eta))
print(resource, bk.T, bk.N, sep='\n')

# asymptotic QFI and BK simulation error
print(qfi_choi_limit('thermal_loss', 1.0, [1, 2, 3], eta=eta))
print([bk_error_lower_bound(r, 1.0) for r in (1, 2, 3, 4)])
