"""The rescaled oscillatory pairing of two test functions concentrates to
2*pi times their pointwise product integral as the scale shrinks."""

from lowdensity import TestFunction, delta_lemma_check

if __name__ == "__main__":
    f = TestFunction.gaussian(width=1.0)
    g = TestFunction.gaussian(center=0.3, width=0.7)
    report = delta_lemma_check(f, g, (0.2, 0.1, 0.05, 0.02, 0.01))
    print(f"target (2*pi * phi(0) * f(0)): {report.rows[0].limit:.10f}\n")
    print(f"{'epsilon':>8}  {'value':>14}  {'rel err':>10}")
    for row in report.rows:
        print(f"{row.epsilon:>8}  {row.value.real:>14.8f}  {row.rel_err:>10.2e}")
