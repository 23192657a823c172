"""Phase-boundary markers and desk-scale likelihood-ratio values per order.

Emits, for each group order L, the analytic impossibility marker, the
inefficient-test marker, and the spectral threshold at 1, together with
exact degree-limited likelihood-ratio second moments on a small grid.
The inefficient-test marker first dips below 1 at L = 11.
"""
from groupsynch import (phase_diagram, stat_threshold_lower_bound,
                        stat_threshold_upper_bound)

print(f"{'L':>3s} {'impossible below':>17s} {'inefficient test above':>23s}")
for L in range(3, 17):
    lo, hi = stat_threshold_lower_bound(L), stat_threshold_upper_bound(L)
    marker = "  <- first below 1" if L == 11 and hi < 1 else ""
    print(f"{L:3d} {lo:17.4f} {hi:23.4f}{marker}")

result = phase_diagram(L_grid=[3, 5, 11], snr_grid=[0.6, 0.9, 1.2], n=16,
                       seed=0)
print("\nper-(L, snr) exact degree-limited second moments (n=16):")
for row in result.rows:
    print(f"  L={row['L']:<2d} snr={row['snr']:.1f}: "
          f"cumulative {row['ldlr_cumulative']:.4f} "
          f"(D={row['D']}, method {row['ldlr_method']})")
