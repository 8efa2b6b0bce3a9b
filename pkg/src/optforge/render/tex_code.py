"""LaTeX renderings of problem instances.

The canonical style writes every basic function in its textbook form
with concrete dimensions and embedded numeric data.  The commuted style
applies a seeded permutation to every commutative +/- term list, at any
nesting depth the term splitter can see.  The factored style uses
algebraically equivalent rewritings with shared constants hoisted.

The splitter that powers commutation is exposed
(:func:`split_signed_terms`, :func:`normalize_terms`) so tests can
check that two renderings carry the same multiset of summands: the
normal form recursively sorts all commutable term lists, making it
order-invariant.  Absolute values use ``\\lvert``/``\\rvert`` (and
norms ``\\lVert``/``\\rVert``) so bracket depth is unambiguous.
Subscript/superscript groups are copied verbatim -- index arithmetic
and exponents are never rearranged.
"""

import numpy as np

from .styles import WritingStyle

__all__ = [
    "tex_num",
    "split_signed_terms",
    "join_signed_terms",
    "permute_terms",
    "normalize_terms",
    "render_tex_objective",
    "render_tex_constraints",
]


def tex_num(v):
    """Full-precision literal; scientific notation becomes x 10^{k}."""
    r = repr(float(v))
    if "e" in r or "E" in r:
        mantissa, exp = r.lower().split("e")
        return rf"{mantissa} \times 10^{{{int(exp)}}}"
    return r


# ---------------------------------------------------------------------------
# signed-term machinery

_OPEN = {"(", "[", "{", "\\lvert", "\\lVert"}
_CLOSE = {")", "]", "}", "\\rvert", "\\rVert"}


def _tokens(s):
    toks = []
    i = 0
    n = len(s)
    while i < n:
        if s[i] == "\\":
            j = i + 1
            while j < n and s[j].isalpha():
                j += 1
            toks.append(s[i:j] if j > i + 1 else s[i])
            i = j if j > i + 1 else i + 1
        else:
            toks.append(s[i])
            i += 1
    return toks


def _delta(tok):
    if tok in _OPEN:
        return 1
    if tok in _CLOSE:
        return -1
    return 0


def _split_token_list(toks):
    terms = []
    cur = []
    sign = 1
    depth = 0
    for t in toks:
        if depth == 0 and t in ("+", "-"):
            if not "".join(cur).strip():
                sign = 1 if t == "+" else -1
            else:
                terms.append((sign, "".join(cur).strip()))
                cur = []
                sign = 1 if t == "+" else -1
            continue
        depth += _delta(t)
        cur.append(t)
    tail = "".join(cur).strip()
    if tail:
        terms.append((sign, tail))
    return terms


def split_signed_terms(s):
    """Split a formula into top-level signed terms.

    Returns a list of ``(sign, text)`` with sign +1/-1; splitting
    happens only at bracket depth 0, where ``( ) [ ] { }`` and the
    lvert/rvert pairs all count as brackets.
    """
    return _split_token_list(_tokens(s.strip()))


def join_signed_terms(terms):
    out = []
    for k, (sign, text) in enumerate(terms):
        if k == 0:
            out.append(("-" if sign < 0 else "") + text)
        else:
            out.append(("- " if sign < 0 else "+ ") + text)
    return " ".join(out)


def _rewrite_groups(text, order_fn):
    """Apply the term transform inside every top-level bracket group,
    except groups attached to _ or ^ (indices and exponents)."""
    toks = _tokens(text)
    out = []
    i = 0
    prev_script = False
    while i < len(toks):
        t = toks[i]
        if t in _OPEN:
            depth = 1
            j = i + 1
            while j < len(toks) and depth > 0:
                depth += _delta(toks[j])
                j += 1
            inner = "".join(toks[i + 1:j - 1])
            closer = toks[j - 1] if depth == 0 else ""
            if prev_script:
                out.append(t + inner + closer)
            else:
                body = _rewrite_expression(inner, order_fn)
                if t.startswith("\\"):
                    # keep command delimiters from gluing onto the body
                    body = f" {body} "
                out.append(t + body + closer)
            prev_script = False
            i = j
        else:
            prev_script = t in ("_", "^")
            out.append(t)
            i += 1
    return "".join(out)


def _rewrite_expression(s, order_fn):
    terms = _split_token_list(_tokens(s))
    if not terms:
        return s
    # rewrite bottom-up so ordering sees final term texts
    terms = [(sign, _rewrite_groups(text, order_fn)) for sign, text in terms]
    if len(terms) > 1:
        terms = order_fn(terms)
    return join_signed_terms(terms)


def permute_terms(s, rng):
    """Seeded recursive permutation of all commutable term lists."""

    def order_fn(terms):
        return [terms[k] for k in rng.permutation(len(terms))]

    return _rewrite_expression(s, order_fn)


def normalize_terms(s):
    """Order-invariant normal form: recursively sorts term lists, so
    any two commutations of the same formula normalize identically."""
    return _rewrite_expression(s, sorted)


# ---------------------------------------------------------------------------
# basic-function formulas (@Z@/@W@/@D@ placeholders)

_CANONICAL = {
    "sphere": [(1, r"\sum_{i=1}^{@D@} @Z@_{i}^{2}")],
    "rastrigin": [(1, r"\sum_{i=1}^{@D@} ( @Z@_{i}^{2}"
                     r" - 10\cos(2\pi @Z@_{i}) + 10 )")],
    "ackley": [
        (-1, r"20 e^{-0.2\sqrt{\frac{1}{@D@}\sum_{i=1}^{@D@} @Z@_{i}^{2}}}"),
        (-1, r"e^{\frac{1}{@D@}\sum_{i=1}^{@D@}\cos(2\pi @Z@_{i})}"),
        (1, "20"),
        (1, "e"),
    ],
    "rosenbrock": [(1, r"\sum_{i=1}^{@D@-1} ( 100(@Z@_{i+1} - @Z@_{i}^{2})^{2}"
                      r" + (1 - @Z@_{i})^{2} )")],
    "griewank": [
        (1, "1"),
        (1, r"\frac{1}{4000}\sum_{i=1}^{@D@} @Z@_{i}^{2}"),
        (-1, r"\prod_{i=1}^{@D@}\cos(\frac{@Z@_{i}}{\sqrt{i}})"),
    ],
    "schwefel": [
        (1, r"418.9828872724339 \cdot @D@"),
        (-1, r"\sum_{i=1}^{@D@} @Z@_{i}\sin(\sqrt{\lvert @Z@_{i} \rvert})"),
    ],
    "bent_cigar": [
        (1, r"@Z@_{1}^{2}"),
        (1, r"10^{6}\sum_{i=2}^{@D@} @Z@_{i}^{2}"),
    ],
    "levy": [
        (1, r"\sin^{2}(\pi @W@_{1})"),
        (1, r"\sum_{i=1}^{@D@-1} ( (@W@_{i}-1)^{2}"
            r"(1 + 10\sin^{2}(\pi @W@_{i} + 1)) )"),
        (1, r"(@W@_{@D@}-1)^{2}(1 + \sin^{2}(2\pi @W@_{@D@}))"),
    ],
    "katsuura": [
        (1, r"\frac{10}{@D@^{2}}\prod_{i=1}^{@D@} (1 + i\sum_{j=1}^{32}"
            r"\frac{\lvert 2^{j} @Z@_{i} - \mathrm{round}(2^{j} @Z@_{i}) \rvert}"
            r"{2^{j}})^{\frac{10}{@D@^{1.2}}}"),
        (-1, r"\frac{10}{@D@^{2}}"),
    ],
    "happycat": [
        (1, r"\lvert \sum_{i=1}^{@D@} @Z@_{i}^{2} - @D@ \rvert^{1/4}"),
        (1, r"\frac{1}{@D@}(\frac{1}{2}\sum_{i=1}^{@D@} @Z@_{i}^{2}"
            r" + \sum_{i=1}^{@D@} @Z@_{i})"),
        (1, r"\frac{1}{2}"),
    ],
    "discus": [
        (1, r"10^{6} @Z@_{1}^{2}"),
        (1, r"\sum_{i=2}^{@D@} @Z@_{i}^{2}"),
    ],
    "weierstrass": [
        (1, r"\sum_{i=1}^{@D@}\sum_{k=0}^{20} ( 0.5^{k}"
            r"\cos(2\pi \cdot 3^{k}(@Z@_{i} + 0.5)) )"),
        (-1, r"@D@\sum_{k=0}^{20} ( 0.5^{k}\cos(\pi \cdot 3^{k}) )"),
    ],
}

_FACTORED = {
    "sphere": [(1, r"\lVert @Z@ \rVert^{2}")],
    "rastrigin": [
        (1, r"10 \cdot @D@"),
        (1, r"\sum_{i=1}^{@D@} @Z@_{i}^{2}"),
        (-1, r"10\sum_{i=1}^{@D@}\cos(2\pi @Z@_{i})"),
    ],
    "ackley": [
        (1, r"20(1 - e^{-0.2\sqrt{\frac{1}{@D@}\sum_{i=1}^{@D@} @Z@_{i}^{2}}})"),
        (1, "e"),
        (-1, r"e^{\frac{1}{@D@}\sum_{i=1}^{@D@}\cos(2\pi @Z@_{i})}"),
    ],
    "rosenbrock": [
        (1, r"100\sum_{i=1}^{@D@-1} (@Z@_{i+1} - @Z@_{i}^{2})^{2}"),
        (1, r"\sum_{i=1}^{@D@-1} (1 - @Z@_{i})^{2}"),
    ],
    "griewank": [
        (1, r"\frac{4000 + \sum_{i=1}^{@D@} @Z@_{i}^{2}}{4000}"),
        (-1, r"\prod_{i=1}^{@D@}\cos(\frac{@Z@_{i}}{\sqrt{i}})"),
    ],
    "schwefel": [(1, r"\sum_{i=1}^{@D@} ( 418.9828872724339"
                    r" - @Z@_{i}\sin(\sqrt{\lvert @Z@_{i} \rvert}) )")],
    "bent_cigar": [
        (1, r"10^{6}\sum_{i=1}^{@D@} @Z@_{i}^{2}"),
        (-1, r"(10^{6} - 1) @Z@_{1}^{2}"),
    ],
    "levy": [
        (1, r"\sin^{2}(\pi @W@_{1})"),
        (1, r"\sum_{i=1}^{@D@-1} (@W@_{i}-1)^{2}"),
        (1, r"10\sum_{i=1}^{@D@-1} ( (@W@_{i}-1)^{2}\sin^{2}(\pi @W@_{i} + 1) )"),
        (1, r"(@W@_{@D@}-1)^{2}"),
        (1, r"(@W@_{@D@}-1)^{2}\sin^{2}(2\pi @W@_{@D@})"),
    ],
    "katsuura": [(1, r"\frac{10}{@D@^{2}} ( \prod_{i=1}^{@D@} (1 + i"
                    r"\sum_{j=1}^{32}\frac{\lvert 2^{j} @Z@_{i}"
                    r" - \mathrm{round}(2^{j} @Z@_{i}) \rvert}{2^{j}})"
                    r"^{\frac{10}{@D@^{1.2}}} - 1 )")],
    "happycat": [
        (1, r"\lvert \lVert @Z@ \rVert^{2} - @D@ \rvert^{1/4}"),
        (1, r"\frac{\lVert @Z@ \rVert^{2}}{2 \cdot @D@}"),
        (1, r"\frac{1}{@D@}\sum_{i=1}^{@D@} @Z@_{i}"),
        (1, r"\frac{1}{2}"),
    ],
    "discus": [
        (1, r"\sum_{i=1}^{@D@} @Z@_{i}^{2}"),
        (1, r"(10^{6} - 1) @Z@_{1}^{2}"),
    ],
    "weierstrass": [(1, r"\sum_{k=0}^{20} ( 0.5^{k} ( \sum_{i=1}^{@D@}"
                       r"\cos(2\pi \cdot 3^{k}(@Z@_{i} + 0.5))"
                       r" - @D@\cos(\pi \cdot 3^{k}) ) )")],
}


def _fill(terms, z, w, d):
    return [
        (s, t.replace("@Z@", z).replace("@W@", w)
            .replace("@D@-1", str(d - 1)).replace("@D@", str(d)))
        for s, t in terms
    ]


def _tex_vector(values):
    return "(" + ", ".join(tex_num(v) for v in values) + ")"


def _tex_matrix(name, matrix):
    rows = [" & ".join(tex_num(v) for v in row) for row in matrix]
    body = " \\\\\n".join(rows)
    return f"{name} = \\begin{{pmatrix}}\n{body}\n\\end{{pmatrix}}"


def _component_data_tex(comp, c, k_total):
    tf = comp.transform
    z = "z" if k_total == 1 else f"z^{{({c})}}"
    w = "w" if k_total == 1 else f"w^{{({c})}}"
    has_rot = not np.array_equal(tf.rotation, np.eye(tf.d))
    has_shift = tf.shift.any()
    lines = []
    if comp.segment is not None:
        xsym = f"x^{{({c})}}"
        idx = ", ".join(f"x_{{{i + 1}}}" for i in comp.segment)
        lines.append(f"{xsym} = ({idx})")
    else:
        xsym = "x"
    msym = f"M_{{{c}}}"
    osym = "o" if k_total == 1 else f"o^{{({c})}}"
    if has_rot and has_shift:
        lines.insert(0, f"{z} = {msym}^{{\\top}}({xsym} - {osym})")
    elif has_rot:
        lines.insert(0, f"{z} = {msym}^{{\\top}} {xsym}")
    elif has_shift:
        lines.insert(0, f"{z} = {xsym} - {osym}")
    else:
        lines.insert(0, f"{z} = {xsym}")
    if has_rot:
        lines.append(_tex_matrix(msym, tf.rotation))
    if has_shift:
        lines.append(f"{osym} = {_tex_vector(tf.shift)}")
    if comp.basic == "levy":
        lines.append(f"{w}_{{i}} = 1 + \\frac{{{z}_{{i}} - 1}}{{4}}")
    return lines


def render_tex_objective(instance, style, seed=0):
    """Objective block: the f(x) formula plus the data lines defining
    every symbol it uses."""
    style = WritingStyle.parse(style)
    forms = _FACTORED if style == WritingStyle.TEX_FACTORED else _CANONICAL
    k_total = instance.k
    terms = []
    data = []
    for c, comp in enumerate(instance.components, start=1):
        z = "z" if k_total == 1 else f"z^{{({c})}}"
        w = "w" if k_total == 1 else f"w^{{({c})}}"
        dc = len(comp.segment) if comp.segment is not None else instance.d
        sub = _fill(forms[comp.basic], z, w, dc)
        if comp.segment is None and comp.weight != 1.0:
            terms.append((1, f"{tex_num(comp.weight)} ( {join_signed_terms(sub)} )"))
        else:
            terms.extend(sub)
        data.extend(_component_data_tex(comp, c, k_total))
    formula = join_signed_terms(terms)
    if style == WritingStyle.TEX_COMMUTED:
        rng = np.random.Generator(np.random.PCG64(seed))
        formula = permute_terms(formula, rng)
    lines = [f"f(x) = {formula}"]
    if data:
        lines.append(r"\text{where}")
        lines.extend(data)
    return "\n".join(lines) + "\n"


_CON_TEX = {
    "linear": (1, r"\sum_{i=1}^{@D@} a^{(@J@)}_{i} @Y@_{i}"),
    "ball": (1, r"\sum_{i=1}^{@D@} (@Y@_{i})^{2}"),
    "cumsum_zero": (1, r"\sum_{i=1}^{@D@} (\sum_{k=1}^{i} @Y@_{k})^{2}"),
    "chain_zero": (1, r"\sum_{i=1}^{@D@-1} (@Y@_{i}^{2} - @Y@_{i+1})^{2}"),
    "product": (1, r"\prod_{i=1}^{@D@} @Y@_{i}"),
    "sinusoid": (1, r"\sum_{i=1}^{@D@} \sin(@Y@_{i})"),
}


def render_tex_constraints(instance, style, seed=0):
    """Constraint block: one relation per constraint plus data lines."""
    style = WritingStyle.parse(style)
    if not instance.constraints:
        return ""
    rng = (np.random.Generator(np.random.PCG64(seed))
           if style == WritingStyle.TEX_COMMUTED else None)
    lines = []
    data = []
    n_g = 0
    n_h = 0
    for j, spec in enumerate(instance.constraints, start=1):
        y = f"y^{{({j})}}"
        sign, main = _CON_TEX[spec.kind]
        main = (main.replace("@Y@", y).replace("@D@-1", str(spec.d - 1))
                .replace("@D@", str(spec.d)).replace("@J@", str(j)))
        terms = [(sign, main)]
        offset = {"linear": spec.params.get("b"),
                  "ball": None,
                  "product": spec.params.get("c"),
                  "sinusoid": spec.params.get("b")}.get(spec.kind)
        if spec.kind == "ball":
            terms.append((-1, f"{tex_num(spec.params['radius'])}^{{2}}"))
        elif offset is not None and offset != 0.0:
            terms.append((-1 if offset > 0 else 1, tex_num(abs(offset))))
        lhs = join_signed_terms(terms)
        if rng is not None:
            lhs = permute_terms(lhs, rng)
        if spec.is_equality:
            n_h += 1
            lines.append(f"h_{{{n_h}}}(x) = {lhs} = 0")
        else:
            n_g += 1
            lines.append(f"g_{{{n_g}}}(x) = {lhs} \\le 0")
        data.append(f"{y} = x - c^{{({j})}}")
        data.append(f"c^{{({j})}} = {_tex_vector(spec.center)}")
        if spec.kind == "linear":
            data.append(f"a^{{({j})}} = {_tex_vector(spec.params['a'])}")
    return "\n".join(lines + [r"\text{where}"] + data) + "\n"
