"""Kernel backend selection.

The compiled extension is preferred when present; setting the environment
variable ``SECACC_PURE_PYTHON`` (to any non-empty value) forces the
pure-Python kernels, which the benchmark uses to compare both.
"""

import os

if os.environ.get("SECACC_PURE_PYTHON"):
    from . import _purepy as impl

    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        from . import _purepy as impl

        HAVE_COMPILED = False

sha256_compress = impl.sha256_compress
aes256_key_schedule = impl.aes256_key_schedule
aes256_encrypt_block = impl.aes256_encrypt_block
aes256_decrypt_block = impl.aes256_decrypt_block


def backend_name() -> str:
    return "compiled" if HAVE_COMPILED else "pure-python"
