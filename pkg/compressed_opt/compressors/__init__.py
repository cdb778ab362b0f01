# coding=utf-8
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from compressed_opt.enums import CompressorKind

from .absolute import AbsoluteRound, AbsoluteThreshold
from .compressor import (
    CompressionError,
    CompressionResult,
    Compressor,
    Identity,
    NonFiniteInputError,
    RandK,
    Repeated,
    TopK,
    rounds_for_exact_reconstruction,
)
from .contraction import (
    ContractionEstimate,
    estimate_contraction,
    estimate_contraction_detailed,
)


def build_compressor(block, dimension):
    """Build a compressor from a dict such as {"kind": "topk", "k": 10}.

    Pydantic compressor configs are accepted too.
    """
    if hasattr(block, 'model_dump'):
        block = block.model_dump()
    if not isinstance(block, dict) or 'kind' not in block:
        raise CompressionError(
            'compressor config needs a "kind", got {!r}'.format(block))

    try:
        kind = CompressorKind(block['kind'])
    except ValueError:
        raise CompressionError('{} compressor is not supported.'.format(
            block['kind']))

    try:
        if kind == CompressorKind.identity:
            return Identity(dimension)
        elif kind == CompressorKind.topk:
            return TopK(dimension, block['k'])
        elif kind == CompressorKind.randk:
            return RandK(dimension, block['k'])
        elif kind == CompressorKind.repeated:
            base = build_compressor(block['base'], dimension)
            return Repeated(base, block['rounds'])
        elif kind == CompressorKind.absolute_round:
            return AbsoluteRound(dimension, block['step'])
        else:
            return AbsoluteThreshold(dimension, block['threshold'])
    except KeyError as e:
        raise CompressionError('{} compressor is missing field {}'.format(
            kind.value, e))


def compress(block, x, rng=None):
    """One-shot compression of x with the compressor described by block."""
    return build_compressor(block, len(x)).compress(x, rng)


def contraction_parameter(block, dimension):
    """Declared δ (contractive) or Δ (absolute) of a compressor block."""
    return build_compressor(block, dimension).contraction_parameter()
