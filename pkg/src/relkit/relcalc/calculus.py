"""Relative root elements and their coefficient maps, as exact polynomials.

For a split projection (trivial Gamma) the root module of a relative root
alpha is free on the fiber over alpha.  X_alpha(v) is the product of the
absolute root elements x_a(v_a) over the fiber in canonical order.  The sum
maps q and commutator maps N are read off by factorizing products of such
elements over the appropriate multiples.
"""
from __future__ import annotations

from functools import cached_property

from ..chevalley import Representation, make_rep
from ..poly import Poly, PolyMatrix
from ..relroots import ProjectionSpec, RelativeRootSystem, SpecError
from ..relroots.system import _add, _scale, neg, opposite_proportional, proportionality
from ..rootcore import canonical_key


class FactorizationError(ValueError):
    pass


def symbols(tag: str, dim: int) -> list:
    return [Poly.var(f"{tag}{k}") for k in range(dim)]


class RelCalc:
    """Symbolic calculus on one split relative root system."""

    def __init__(self, spec: ProjectionSpec | RelativeRootSystem, rep: str | Representation = "adjoint"):
        rs = spec if isinstance(spec, RelativeRootSystem) else RelativeRootSystem(spec)
        if not rs.spec.gamma_is_trivial:
            raise SpecError("relative root elements are realized for trivial Gamma only")
        self.rs = rs
        self.base = rs.base
        self.rep = rep if isinstance(rep, Representation) else make_rep(self.base, rep)
        self._q: dict = {}
        self._comm: dict = {}

    @property
    def label(self) -> str:
        return self.rs.spec.label

    def fiber(self, alpha) -> list:
        fib = self.rs.fiber(alpha)
        if not fib:
            raise SpecError(f"{list(alpha)} is not a relative root")
        return fib

    def dim(self, alpha) -> int:
        return len(self.fiber(alpha))

    # elements

    def element(self, alpha, v) -> PolyMatrix:
        """X_alpha(v): ordered product of x_a(v_a) over the fiber."""
        fib = self.fiber(alpha)
        if len(v) != len(fib):
            raise ValueError(f"X_{list(alpha)} takes {len(fib)} coordinates, got {len(v)}")
        out = PolyMatrix.identity(self.rep.dim)
        for a, t in zip(fib, v):
            if t:
                out = out @ self.rep.root_element(a, t)
        return out

    def element_inverse(self, alpha, v) -> PolyMatrix:
        fib = self.fiber(alpha)
        out = PolyMatrix.identity(self.rep.dim)
        for a, t in reversed(list(zip(fib, v))):
            if t:
                out = out @ self.rep.root_element(a, -_poly(t))
        return out

    def product(self, factors) -> PolyMatrix:
        """Ordered product of X_gamma(values) over (gamma, values) pairs."""
        out = PolyMatrix.identity(self.rep.dim)
        for gamma, vals in factors:
            out = out @ self.element(gamma, vals)
        return out

    # factorization

    def unipotent_factorize(self, M: PolyMatrix, targets) -> dict:
        """Coordinates of M as an ordered product over the given relative roots.

        ``targets`` must be listed in nondecreasing order of some grading that
        is positive on all of them; each relative root expands to its fiber in
        canonical order.  Raises FactorizationError if M is not such a product.
        """
        out = {}
        cur = M
        for gamma in targets:
            coords = []
            for a in self.fiber(gamma):
                i, j, val = self.rep.nonzero_entry(a)
                e = cur.entry(i, j)
                if any(c % val for c in e.terms.values()):
                    raise FactorizationError(f"entry for {list(a)} not divisible by {val}")
                t = Poly({m: c // val for m, c in e.terms.items()})
                coords.append(t)
                if t:
                    cur = self.rep.root_element(a, -t) @ cur
            out[tuple(gamma)] = coords
        if not cur.is_identity():
            raise FactorizationError("residue is not the identity after peeling")
        return out

    # coefficient maps

    def q(self, alpha) -> dict:
        """{i: q^i_alpha(v, w)} with X(v) X(w) = X(v + w) prod_i X_{i alpha}(q^i)."""
        alpha = tuple(alpha)
        if alpha not in self._q:
            d = self.dim(alpha)
            v, w = symbols("v", d), symbols("w", d)
            M = self.element_inverse(alpha, [x + y for x, y in zip(v, w)])
            M = M @ self.element(alpha, v) @ self.element(alpha, w)
            targets = [_scale(i, alpha) for i in range(2, self.rs.multiples[alpha] + 1)]
            coords = self.unipotent_factorize(M, targets)
            self._q[alpha] = {i: coords[_scale(i, alpha)] for i in range(2, len(targets) + 2)}
        return self._q[alpha]

    def commutator_targets(self, alpha, beta) -> list:
        """[(gamma, (i, j) or None)] for gamma = i alpha + j beta, in factorization order."""
        alpha, beta = tuple(alpha), tuple(beta)
        pr = proportionality(alpha, beta)
        if pr is not None and pr[0] * pr[1] < 0:
            raise SpecError("opposite multiples have no commutator formula")
        bound = max(abs(x) for e in self.rs.elements for x in e) + 1
        found = {}
        for i in range(1, bound + 1):
            for j in range(1, bound + 1):
                g = _add(_scale(i, alpha), _scale(j, beta))
                if self.rs.is_root(g):
                    found.setdefault(g, []).append((i, j))
        if pr is None:
            out = [(g, ij[0]) for g, ij in found.items()]
            out.sort(key=lambda t: (t[1][0] + t[1][1], canonical_key(t[0])))
            return out
        # same direction: grade by the multiple of the primitive vector
        r = pr[0]
        out = [(g, ij[0] if len(ij) == 1 else None) for g, ij in found.items()]
        out.sort(key=lambda t: _scale_of(t[0], alpha, r))
        return out

    def commutator(self, alpha, beta) -> list:
        """[(gamma, ij, coords)] with [X_alpha(u), X_beta(v)] = prod X_gamma(coords)."""
        key = (tuple(alpha), tuple(beta))
        if key not in self._comm:
            u, v = symbols("u", self.dim(alpha)), symbols("v", self.dim(beta))
            M = (self.element(alpha, u) @ self.element(beta, v)
                 @ self.element_inverse(alpha, u) @ self.element_inverse(beta, v))
            targets = self.commutator_targets(alpha, beta)
            coords = self.unipotent_factorize(M, [g for g, _ in targets])
            self._comm[key] = [(g, ij, coords[g]) for g, ij in targets]
        return self._comm[key]

    def N(self, alpha, beta) -> dict:
        """{(i, j): N_{alpha beta i j}(u, v)}.

        For proportional alpha, beta only targets with a unique (i, j) are keyed.
        """
        return {ij: coords for _, ij, coords in self.commutator(alpha, beta) if ij is not None}

    def N11(self, alpha, beta) -> list:
        got = self.N(alpha, beta).get((1, 1))
        if got is None:
            raise SpecError(f"{list(_add(alpha, beta))} is not a relative root")
        return got

    def n_chain(self, roots, values, evaluate=None) -> list:
        """N_{alpha_0, ..., alpha_n}(v_0, ..., v_n) by the recursive (1, 1) rule.

        ``values`` holds one coordinate list per root; they may be polynomials,
        or ring elements when ``evaluate(poly, assignment)`` is supplied.
        """
        roots = [tuple(r) for r in roots]
        acc = list(values[0])
        total = roots[0]
        for beta, vb in zip(roots[1:], values[1:]):
            nxt = _add(total, beta)
            if not self.rs.is_root(nxt):
                raise SpecError(f"partial sum {list(nxt)} is not a relative root")
            maps = self.N11(total, beta)
            if evaluate is None:
                sub = {f"u{k}": x for k, x in enumerate(acc)}
                sub.update({f"v{k}": x for k, x in enumerate(vb)})
                acc = [m.substitute(sub) for m in maps]
            else:
                assign = {f"u{k}": x for k, x in enumerate(acc)}
                assign.update({f"v{k}": x for k, x in enumerate(vb)})
                acc = [evaluate(m, assign) for m in maps]
            total = nxt
        return acc

    @cached_property
    def commuting_pairs(self) -> list:
        """All ordered pairs (alpha, beta) that admit a commutator formula."""
        return [(a, b) for a in self.rs.elements for b in self.rs.elements
                if a != b and not opposite_proportional(a, b)]


def _poly(t) -> Poly:
    return t if isinstance(t, Poly) else Poly.const(int(t))


def _scale_of(g, alpha, r) -> int:
    """k with g = (k / r) alpha, for g proportional to alpha in the same direction."""
    k = next(i for i in range(len(alpha)) if alpha[i])
    return g[k] * r // alpha[k]


__all__ = ["FactorizationError", "RelCalc", "neg", "symbols"]
