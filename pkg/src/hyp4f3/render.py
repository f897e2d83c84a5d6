"""Text and LaTeX rendering for polynomials, rational functions and
gamma-type products.

The text form is valid Python/sympy syntax (``**`` for powers and
``gamma(...)`` for the gamma function) so renderings can be parsed back.
"""

from __future__ import annotations

from .symbolic import VARIABLES, Poly, RationalFunction


def _monomial(exps, sep: str, power: str) -> str:
    parts = []
    for v, k in zip(VARIABLES, exps):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(power.format(v=v, k=k))
    return sep.join(parts)


def _poly(p: Poly, sep: str, power: str) -> str:
    if not p:
        return "0"
    out = []
    for exps, coeff in p.terms():
        coeff = int(coeff)
        mono = _monomial(exps, sep, power)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}{sep}{mono}"
        if not out:
            out.append(("-" if coeff < 0 else "") + body)
        else:
            out.append((" - " if coeff < 0 else " + ") + body)
    return "".join(out)


def poly_text(p: Poly) -> str:
    return _poly(p, "*", "{v}**{k}")


def poly_latex(p: Poly) -> str:
    return _poly(p, " ", "{v}^{{{k}}}")


def _is_atom(p: Poly) -> bool:
    """A single monomial with coefficient +-1, or a nonnegative integer."""
    if len(p) != 1:
        return False
    (exps, coeff), = p.terms()
    if not any(exps):
        return coeff >= 0
    return abs(coeff) == 1 and sum(1 for k in exps if k) == 1


def _wrap(p: Poly, atom_ok) -> str:
    s = poly_text(p)
    return s if atom_ok(p) else f"({s})"


def rf_text(x: RationalFunction) -> str:
    if x.den == 1:
        return poly_text(x.num)
    num = poly_text(x.num) if len(x.num) == 1 else f"({poly_text(x.num)})"
    return f"{num}/{_wrap(x.den, _is_atom)}"


def rf_latex(x: RationalFunction) -> str:
    if x.den == 1:
        return poly_latex(x.num)
    return f"\\frac{{{poly_latex(x.num)}}}{{{poly_latex(x.den)}}}"


def _gamma_parts(g, latex: bool):
    from .symbolic import linear_poly

    top, bottom = [], []
    for coeffs, shift, exp in g.factors:
        arg = linear_poly(coeffs, shift)
        if latex:
            s = f"\\Gamma({poly_latex(arg)})"
            if abs(exp) != 1:
                s += f"^{{{abs(exp)}}}"
        else:
            s = f"gamma({poly_text(arg)})"
            if abs(exp) != 1:
                s += f"**{abs(exp)}"
        (top if exp > 0 else bottom).append(s)
    return top, bottom


def gamma_text(g) -> str:
    top, bottom = _gamma_parts(g, latex=False)
    pre = g.prefactor
    num_parts, den_parts = [], []
    sign = ""
    num = pre.num
    if num.LC < 0 and (top or len(num) > 1):
        sign, num = "-", -num
    if num != 1 or not top:
        num_parts.append(poly_text(num) if len(num) == 1 else f"({poly_text(num)})")
    num_parts += top
    if pre.den != 1:
        den_parts.append(poly_text(pre.den) if len(pre.den) == 1 and _is_atom(pre.den) else f"({poly_text(pre.den)})")
    den_parts += bottom
    s = sign + "*".join(num_parts)
    if den_parts:
        den = "*".join(den_parts)
        s += f"/({den})" if len(den_parts) > 1 else f"/{den}"
    return s


def gamma_latex(g) -> str:
    top, bottom = _gamma_parts(g, latex=True)
    pre = g.prefactor
    num = pre.num
    sign = ""
    if num.LC < 0:
        sign, num = "-", -num
    num_s = "" if num == 1 and top else (poly_latex(num) if len(num) == 1 else f"\\left({poly_latex(num)}\\right)")
    num_s += "".join(top)
    den_s = ""
    if pre.den != 1:
        den_s = poly_latex(pre.den) if len(pre.den) == 1 else f"\\left({poly_latex(pre.den)}\\right)"
    den_s += "".join(bottom)
    if not den_s:
        return sign + num_s
    return f"{sign}\\frac{{{num_s}}}{{{den_s}}}"


def transformation_text(t) -> str:
    """Multi-line summary: the slots, the right-hand parameters and eta."""
    lines = [
        f"epsilon = {t.epsilon}",
        f"M = {t.M.to_text()}",
        f"lambda = {t.lam.to_text()}",
        f"alpha = {t.alpha.to_text()}",
        f"beta = {t.beta.to_text()}",
        f"parameters = ({', '.join(t.D.parameter_text())})",
        f"eta = {t.eta().to_text()}",
    ]
    return "\n".join(lines)


def _hyp_latex(params: list[str], slot: str) -> str:
    top = ", ".join(params[:3] + [f"{slot}+1"])
    bottom = ", ".join(params[3:5] + [slot])
    return f"{{}}_{{4}}F_{{3}}\\!\\left(\\begin{{matrix}}{top}\\\\{bottom}\\end{{matrix}}\\right)"


def transformation_latex(t) -> str:
    params = [poly_latex(p) for p in t.D.linear_polys()]
    lhs = _hyp_latex(list("abcde"), "f")
    rhs = _hyp_latex(params, "\\eta")
    if not t.epsilon:
        factor = f"\\frac{{{rf_latex(t.lam)}}}{{f}}\\,"
    elif t.lam.is_zero():
        factor = ""
    else:
        factor = f"\\frac{{f + {rf_latex(t.lam)}}}{{f}}\\,"
    m = "" if t.M.is_unit() else t.M.to_latex() + "\\,"
    return f"{lhs} = {m}{factor}{rhs},\\quad \\eta = {t.eta().to_latex()}"


def _term_latex(term) -> str:
    params = [poly_latex(p) for p in term.argument.linear_polys()]
    x, y = term.f_factor
    coeff = term.coefficient.to_latex()
    if not (x.is_one() and y.is_zero()):
        if y.is_zero():
            weight = rf_latex(x)
        elif x.is_zero():
            weight = f"\\frac{{{rf_latex(y)}}}{{f}}"
        else:
            weight = f"{rf_latex(x)} + \\frac{{{rf_latex(y)}}}{{f}}"
        coeff = f"{coeff}\\left({weight}\\right)"
    if term.kind == "F4":
        body = _hyp_latex(params, term.f_slot.to_latex())
    else:
        if term.kind == "F2":
            params = [poly_latex(p + 1) for p in term.argument.linear_polys()]
            q = term.argument.linear_polys()
            coeff = f"{coeff}\\frac{{{poly_latex(q[0] * q[1] * q[2])}}}{{{poly_latex(q[3] * q[4])}}}"
        top, bottom = ", ".join(params[:3]), ", ".join(params[3:5])
        body = f"{{}}_{{3}}F_{{2}}\\!\\left(\\begin{{matrix}}{top}\\\\{bottom}\\end{{matrix}}\\right)"
    return body if coeff == "1" else f"{coeff}\\,{body}"


def relation_latex(rel) -> str:
    side = lambda ts: " + ".join(_term_latex(t) for t in ts)  # noqa: E731
    return f"{side(rel.lhs)} = {side(rel.rhs)}"
