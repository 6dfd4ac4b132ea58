"""Fixed key material for deterministic command-line runs.

The big-number engine benchmarks raw modular exponentiation, so any valid
(n, e, d) triple works; these were generated once and frozen so repeated
runs produce byte-identical outputs.
"""

from .crypto import RsaParams

_N512 = int(
    "a2f9cc54400cbb1a1fd8ced0db862051f413a5e7e68ddaa3e8ee203f7e37e61b"
    "466f30c71f3cdfa7f66371dad2c30e2b92ec3a85236dacc6722765d044790d6b",
    16,
)
_D512 = int(
    "76f1e74de9fd20a4fd6f47ea28fda82308073b03984219bb9d2a064130c66d5a"
    "7a5bd6c7e767e54909a6c60128e55c61970b12c47ffe7afb4b81da3dc28e3ef9",
    16,
)
_N1024 = int(
    "d436f9bd401f2e8aec4a918299187963722bf7770a5cd4e48e0e260a39c9835d"
    "e07fb2353b05ebe6642ecc6c5e6a66f9976d51f2f146fba8b0d30fd0091c1058"
    "092153037216a8427461dd45d30a17d4af9053e67421597a61ef2efa151c3c3f"
    "faf06edd85c3ef0631499aacff2f5c24aaf8aece8f24dbafb66d2ba4d604c219",
    16,
)
_D1024 = int(
    "afe8c649a6fe72013c6f6f80d7511f465cdcaf2c210de477747dabf0ac082b79"
    "c4df752484c19ad306d67823987c10d1f240ef3e37dc843d481e1cac70f0af66"
    "1791bf7b3d3f4c1cb2f8d581c9bb767d4c4be822c4a97eabc651023b9e282605"
    "8839e4df70d4e9e0e7a90b31d64ba99cdbd2e5d319fcecc9f90ac775c9f06f01",
    16,
)

RSA_PUBLIC_EXPONENT = 65537


def default_rsa_params(key_bits: int, direction: str) -> RsaParams:
    """Frozen modulus and exponent for a 512- or 1024-bit run."""
    modulus = {512: _N512, 1024: _N1024}[key_bits]
    if direction == "encrypt":
        exponent = RSA_PUBLIC_EXPONENT
    else:
        exponent = {512: _D512, 1024: _D1024}[key_bits]
    return RsaParams(modulus=modulus, exponent=exponent, key_bits=key_bits)
