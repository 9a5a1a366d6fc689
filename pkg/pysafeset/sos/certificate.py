import logging
from typing import List, Sequence

import numpy as np

from .affine import substitute
from ..poly import Monomial, Polynomial, MatrixPolynomial, monomial_product, monomial_to_text, monomial_from_text
from ..exceptions import CertificateError

log = logging.getLogger(__name__)

# absolute bound on the coefficient residual
ABSOLUTE_TOL = 1e-6


class GramCertificate:
    """Gram matrix witness for an SOS constraint, checked by independent polynomial reconstruction."""

    def __init__(self, constraint_id: str, family: str, kind: str, basis: Sequence[Monomial], gram: np.ndarray,
                 size: int, residual: float, tol: float = 1e-6, scale: float = 0.):
        """Creates a new certificate.

        Args:
            constraint_id: Name of constraint.
            family: Constraint family.
            kind: Kind of constraint.
            basis: Gram basis z.
            gram: Gram matrix G.
            size: Matrix size r of the certified matrix polynomial.
            residual: Max absolute coefficient of reconstruction minus target.
            tol: Tolerance for the residual, relative to 1 + scale.
            scale: Max absolute coefficient of the target.
        """
        self.constraint_id = constraint_id
        self.family = family
        self.kind = kind
        self.basis = [tuple(m) for m in basis]
        self.gram = np.asarray(gram, dtype=float)
        self.size = size
        self.residual = residual
        self.tol = tol
        self.scale = scale

        # eigenvalues
        w = np.linalg.eigvalsh((self.gram + self.gram.T) / 2.)
        self.min_eig = float(w[0])
        self.max_eig = float(w[-1])

    @property
    def is_psd(self) -> bool:
        return self.min_eig >= -1e-8 * (1. + max(0., self.max_eig))

    @property
    def valid(self) -> bool:
        """PSD and residual at most tol (1 + scale)."""
        return self.is_psd and self.residual <= self.tol * (1. + self.scale)

    @property
    def valid_absolute(self) -> bool:
        """PSD and residual at most ABSOLUTE_TOL, regardless of the size of the target."""
        return self.is_psd and self.residual <= ABSOLUTE_TOL

    def reconstruct(self, n: int) -> MatrixPolynomial:
        """The matrix polynomial (I_r kron z)^T G (I_r kron z)."""
        return reconstruct_gram(n, self.basis, self.gram, self.size)

    def to_dict(self) -> dict:
        return {
            'id': self.constraint_id,
            'family': self.family,
            'kind': self.kind,
            'size': self.size,
            'basis': [monomial_to_text(m) or '1' for m in self.basis],
            'gram': [[float(v) for v in row] for row in self.gram],
            'n': len(self.basis[0]) if self.basis else 0,
            'residual': float(self.residual),
            'scale': float(self.scale),
            'tol': self.tol,
            'min_eig': self.min_eig,
            'valid': self.valid,
            'valid_absolute': self.valid_absolute
        }

    @staticmethod
    def from_dict(data: dict) -> 'GramCertificate':
        """Reads a certificate written by to_dict, eigenvalues are recomputed from the Gram matrix."""
        n = int(data['n'])
        basis = [monomial_from_text('' if b == '1' else b, n) for b in data['basis']]
        return GramCertificate(data['id'], data['family'], data['kind'], basis, np.array(data['gram']),
                               int(data['size']), float(data['residual']), float(data.get('tol', 1e-6)),
                               float(data.get('scale', 0.)))

    def __repr__(self):
        return 'GramCertificate(%s, residual=%.3g, min_eig=%.3g, valid=%s)' % (self.constraint_id, self.residual,
                                                                              self.min_eig, self.valid)


def reconstruct_gram(n: int, basis: Sequence[Monomial], gram: np.ndarray, size: int = 1) -> MatrixPolynomial:
    """Builds (I_r kron z)^T G (I_r kron z) from a Gram matrix.

    Args:
        n: Number of variables.
        basis: Gram basis z.
        gram: Gram matrix of size r * len(basis).
        size: Matrix size r.
    """
    q = len(basis)
    if gram.shape != (size * q, size * q):
        raise ValueError('Gram matrix has shape %s, expected %d.' % (gram.shape, size * q))
    entries = []
    for i in range(size):
        row = []
        for j in range(size):
            terms = {}
            block = gram[i * q:(i + 1) * q, j * q:(j + 1) * q]
            for a, za in enumerate(basis):
                for b, zb in enumerate(basis):
                    m = monomial_product(za, zb)
                    terms[m] = terms.get(m, 0.) + float(block[a, b])
            row.append(Polynomial(n, terms))
        entries.append(row)
    return MatrixPolynomial(entries, n=n)


def extract_certificates(solution, tol: float = 1e-6) -> List[GramCertificate]:
    """Checks every SOS constraint of a solved program.

    For each constraint the Gram form is reconstructed from G and compared to the target with the solved
    scalars substituted. Certificates that fail are flagged, not dropped.

    Args:
        solution: SosSolution of a solved program.
        tol: Max allowed coefficient residual, relative to 1 + the largest target coefficient.

    Returns:
        List of certificates in constraint order.
    """
    y = solution.sdp.y
    program = solution.program
    certs = []
    for c in program.constraints:
        if c.kind == 'equality' or c.gram is None:
            continue

        # reconstruct and compare
        G = solution.sdp.grams[c.gram]
        recon = reconstruct_gram(program.n, c.basis, G, c.size)
        target = c.matrix_target().map_coefficients(lambda v: substitute(v, y))
        residual = max((e.max_abs_coefficient() for e in (recon - target).flat()), default=0.)
        scale = max((e.max_abs_coefficient() for e in target.flat()), default=0.)

        cert = GramCertificate(c.name, c.family, c.kind, c.basis, G, c.size, residual, tol, scale)
        if not cert.valid:
            log.warning('Certificate %s is invalid: residual=%.3g, min_eig=%.3g.', c.name, residual, cert.min_eig)
        certs.append(cert)
    return certs


def check_certificates(certs: List[GramCertificate], absolute: bool = False):
    """Raises CertificateError if any certificate is invalid.

    Args:
        certs: Certificates to check.
        absolute: Also require the residual to be at most ABSOLUTE_TOL.
    """
    loose = [c.constraint_id for c in certs if c.valid and not c.valid_absolute]
    if loose:
        log.info('Certificates with residual above %g, but within the relative tolerance: %s.', ABSOLUTE_TOL,
                 ', '.join(loose))
    bad = [c.constraint_id for c in certs if not (c.valid_absolute if absolute else c.valid)]
    if bad:
        raise CertificateError('Invalid certificates: %s.' % ', '.join(bad))


__all__ = ['GramCertificate', 'reconstruct_gram', 'extract_certificates', 'check_certificates', 'ABSOLUTE_TOL']
