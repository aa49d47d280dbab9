"""A seeded corpus of certificates of every kind, for integrity checks."""

from __future__ import annotations

import random
from typing import Iterator

from .categories import MatCat
from .certificates import (
    Certificate,
    contraction_certificate,
    gamma_certificate,
    homotopy_certificate,
    homotopy_nilpotence_certificate,
    iso_certificate,
    nilpotence_certificate,
    ses_certificate,
    strictification_certificate,
)
from .chains import cyl, cylinder_sequences, elementary_decomposition
from .generators import random_chain_map, random_complex, random_contractible, random_nilpotent
from .homology import HomologyWitness, contraction_search
from .nil import HomotopyNilCertificate, NilObject, characteristic_sequence, chi, homotopy_nilpotent_certify
from .projline import apply_objectwise, gamma_finite, t_sequence
from .rings import RingSpec
from .strictify import strictify_object
from .suites import Size, homotopy_nilpotent_input


def certificate_corpus(ring: RingSpec, seed: int = 0, rounds: int = 2) -> Iterator[Certificate]:
    """Yield certificates of all kinds the ring supports, ``rounds`` random draws each."""
    base = MatCat(ring)
    small = Size(3, 2)
    for k in range(rounds):
        rng = random.Random(f"{seed}:corpus:{ring.label()}:{k}")
        E = random_contractible(rng, ring, 3, 2)
        gamma = contraction_search(E)
        if not isinstance(gamma, HomologyWitness):
            yield contraction_certificate(gamma)
            dec = elementary_decomposition(E, gamma)
            yield iso_certificate(dec.iso, dec.inv)
        C = random_complex(rng, ring, 3, 2)
        D = random_complex(rng, ring, 3, 2)
        f = random_chain_map(rng, C, D)
        yield homotopy_certificate(cyl(f).h)
        for s in cylinder_sequences(f):
            yield ses_certificate(s)
        A = rng.randint(1, 3)
        phi = random_nilpotent(rng, ring, A)
        nil = NilObject.certify(base, A, phi)
        yield nilpotence_certificate(ring, A, phi, nil.n)
        yield contraction_certificate(chi(nil).contraction)
        yield ses_certificate(characteristic_sequence("over-base", nil, rng.choice((1, 2, 3))).split_ses())
        if ring.is_field or ring.is_integers:
            yield gamma_certificate(apply_objectwise("l0", C), gamma_finite(apply_objectwise("l0", C)))
            yield gamma_certificate(apply_objectwise("l1", C), gamma_finite(apply_objectwise("l1", C)))
            yield ses_certificate(t_sequence(C, 1).ses)
        if ring.is_field:
            Dn, psi = homotopy_nilpotent_input(rng, ring, small)
            cert = homotopy_nilpotent_certify(Dn, psi)
            if isinstance(cert, HomotopyNilCertificate):
                yield homotopy_nilpotence_certificate(Dn, psi, cert)
            yield strictification_certificate(strictify_object(Dn, psi))
