import numpy as np
from gerbecalc.fields.forms import FormOracle

DEFAULT_STEP = 1e-4


def exterior_derivative_fd(form: FormOracle, p, *tangents, step: float = DEFAULT_STEP) -> float:
    r"""Finite-difference exterior derivative :math:`d\alpha` of a :math:`k`-form at a point.

    The tangents are expressed in the chart around `p` as constant coordinate fields :math:`u_i`, which commute, so
    the coordinate formula

    .. math::

        d\alpha(u_0, \dots, u_k) = \sum_i (-1)^i \, \partial_{u_i} \alpha(u_0, \dots, \hat{u}_i, \dots, u_k)

    applies. Each directional derivative is a central difference with step `step`.

    Args:
        form (FormOracle): Form of degree k <= 2.
        p (np.ndarray): Base point.
        tangents (np.ndarray): k+1 ambient tangent vectors at `p`.
        step (float): Finite-difference step. Default is 1e-4.

    Returns:
        float: Value of the exterior derivative.
    """
    if form.degree > 2:
        raise ValueError("Exterior derivative requires degree <= 2, got %s." % form.degree)
    if len(tangents) != form.degree + 1:
        raise ValueError("Exterior derivative of a %s-form requires %s tangents, got %s." % (
            form.degree, form.degree + 1, len(tangents)))
    target = form.target
    p = np.asarray(p, dtype="float")
    coords = [target.to_chart(p, t) for t in tangents]
    total = 0.0
    for i, u in enumerate(coords):
        others = [c for j, c in enumerate(coords) if j != i]
        values = []
        for sign in [1.0, -1.0]:
            xi = sign * step * u
            q = target.chart(p, xi)
            values.append(form.evaluator(q, *[target.chart_push(p, xi, c) for c in others]))
        total += (-1) ** i * (values[0] - values[1]) / (2 * step)
    if not np.isfinite(total):
        raise ValueError("Exterior derivative of '%s' is not finite at %s." % (form.name, p))
    return float(total)


def exterior_derivative(form: FormOracle, step: float = DEFAULT_STEP) -> FormOracle:
    """Finite-difference exterior derivative as a new :obj:`FormOracle` of degree one higher."""
    return FormOracle(form.degree + 1, lambda p, *v: exterior_derivative_fd(form, p, *v, step=step), form.target,
                      name="d(%s)" % form.name)
