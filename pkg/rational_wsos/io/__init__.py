from .files import (
    canonical_json,
    cone_digest,
    cone_from_dict,
    cone_to_dict,
    read_certificate,
    read_cone,
    read_decomposition,
    read_poly,
    read_trace,
    write_certificate,
    write_cone,
    write_decomposition,
    write_poly,
    write_trace,
)

__all__ = [
    'canonical_json', 'cone_digest', 'cone_from_dict', 'cone_to_dict',
    'read_certificate', 'read_cone', 'read_decomposition', 'read_poly', 'read_trace',
    'write_certificate', 'write_cone', 'write_decomposition', 'write_poly', 'write_trace',
]
