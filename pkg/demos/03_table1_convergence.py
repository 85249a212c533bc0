# %% [markdown]
# # Convergence study on the manufactured solution
#
# Exact solution ``u = exp(-lam t) t^3 x^2 (1 - x)^2`` on (0, 1), T = 1/2,
# with h = tau. Since T = 1/2, tau = 1/20 means 10 time steps on a grid of
# 20 intervals.

# %%
from tempered_wave.analysis import TABLE1, convergence_study, table1_resolutions
from tempered_wave.problems import manufactured_problem

resolutions = table1_resolutions((20, 40, 80, 160))
print("(M, N):", resolutions)

# %%
for (gamma, alpha), ref in TABLE1.items():
    rep = convergence_study(manufactured_problem(alpha, gamma, 0.1), resolutions)
    print(f"\ngamma={gamma}, alpha={alpha}")
    for row, published in zip(rep.rows, ref["errors"]):
        rate = "" if row.rate is None else f"{row.rate:.2f}"
        print(f"  tau=1/{round(1 / row.tau):<4d} error={row.max_error:.4e} "
              f"(table {published:.4e})  rate={rate}")

# %% The same study as CSV, as written by ``tempered-wave converge``
print(convergence_study(manufactured_problem(1.5, 2.0, 0.1), resolutions).to_csv())
