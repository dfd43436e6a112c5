import os
import matplotlib.pyplot as plt
import seaborn as sns
import pandas as pd
import argparse

# Initialize the argparse parser
parser = argparse.ArgumentParser(description="Plot the finite-energy QFI comparison.")

parser.add_argument('--source', type=str, default='demo/results/finite_qfi.csv', help='CSV written by finite_qfi_benchmark.py.')
parser.add_argument('--dest', type=str, default='demo/results/finite_qfi.png', help='Figure path.')
parser.add_argument('--log', action='store_true', help='Logarithmic QFI axis.')

args = parser.parse_args()

df = pd.read_csv(args.source)

# long format, one row per curve point
curves = df.melt(id_vars=['eta', 'nbar'], value_vars=['qfi_asymptotic', 'qfi_suboptimal'], var_name='Simulation', value_name='QFI')
curves['Simulation'] = curves['Simulation'].map({'qfi_asymptotic': 'Asymptotic Choi matrix', 'qfi_suboptimal': 'Finite-energy resource'})

sns.set(style="whitegrid")
fig, ax = plt.subplots(figsize=(6, 4.5))
sns.lineplot(data=curves, x='nbar', y='QFI', hue='Simulation', style='eta', markers=True, ax=ax)

# closed forms as reference
ref = df.drop_duplicates('nbar').sort_values('nbar')
ax.plot(ref['nbar'], ref['closed_asymptotic'], color='black', lw=0.8, ls=':', label='[nbar (nbar + 1)]^-1')
ax.plot(ref['nbar'], ref['closed_suboptimal'], color='gray', lw=0.8, ls=':', label='nbar^-2')

if args.log:
    ax.set_yscale('log')
ax.set_xlabel('Thermal photon number nbar')
ax.set_ylabel('QFI')
ax.legend(fontsize=8)
plt.tight_layout()

os.makedirs(os.path.dirname(args.dest) or '.', exist_ok=True)
plt.savefig(args.dest, dpi=300)
print(f"saved {args.dest}")
