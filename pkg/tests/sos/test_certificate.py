import numpy as np
import pytest

from pysafeset.exceptions import CertificateError
from pysafeset.poly import parse_polynomial
from pysafeset.sos import SosProgram, GramCertificate, reconstruct_gram, check_certificates


def _certificate() -> GramCertificate:
    prog = SosProgram(2)
    prog.add_sos(parse_polynomial('x1^2 + 2*x1*x2 + 2*x2^2 + 1', 2), name='p')
    return prog.solve().certificates()[0]


def test_reconstruct():
    basis = [(0,), (1,)]
    G = np.array([[1., 1.], [1., 1.]])
    p = reconstruct_gram(1, basis, G)[0, 0]
    assert p == parse_polynomial('(1 + x1)^2', 1)

    with pytest.raises(ValueError):
        reconstruct_gram(1, basis, np.eye(3))


def test_valid():
    cert = _certificate()
    assert cert.valid
    assert cert.constraint_id == 'p'
    check_certificates([cert])


def test_corrupted():
    cert = _certificate()
    data = cert.to_dict()

    # corrupt gram, residual is recomputed from scratch
    data['gram'][0][0] += 0.5
    bad = GramCertificate.from_dict(data)
    recon = bad.reconstruct(2)[0, 0]
    residual = (recon - parse_polynomial('x1^2 + 2*x1*x2 + 2*x2^2 + 1', 2)).max_abs_coefficient()
    assert residual == pytest.approx(0.5)

    # negative eigenvalue is flagged
    data = cert.to_dict()
    data['gram'] = (-np.eye(len(data['basis']))).tolist()
    bad = GramCertificate.from_dict(data)
    assert not bad.valid
    with pytest.raises(CertificateError):
        check_certificates([bad])


def test_serialization():
    cert = _certificate()
    other = GramCertificate.from_dict(cert.to_dict())
    assert other.basis == cert.basis
    assert other.valid == cert.valid
    assert other.gram == pytest.approx(cert.gram)


def test_absolute():
    # residual 5e-6 is within tol (1 + scale) but above the absolute 1e-6
    cert = GramCertificate('p', 'safety', 'sos', [(0,), (1,)], np.eye(2), 1, 5e-6, scale=100.)
    assert cert.valid
    assert not cert.valid_absolute
    assert not cert.to_dict()['valid_absolute']
    check_certificates([cert])
    with pytest.raises(CertificateError):
        check_certificates([cert], absolute=True)

    # well solved ones pass both
    cert = _certificate()
    assert cert.valid_absolute
    check_certificates([cert], absolute=True)
