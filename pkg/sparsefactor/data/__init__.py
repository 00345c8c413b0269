"""
Synthetic sequence tasks and matrix inputs for sparsefactor.
"""

from .matrices import (
    LOADERS,
    SYNTH_KINDS,
    MatrixSource,
    gradient_magnitude,
    load_matrix,
    synth_matrix,
)
from .sequences import (
    GENERATORS,
    VOCAB,
    AddingDataset,
    AddingInstance,
    Dataset,
    OrderDataset,
    OrderInstance,
    adding_target,
    dataset_from_instances,
    gen_adding,
    gen_temporal_order,
    generate,
    order_label,
    read_dataset,
    write_dataset,
)

__all__ = [
    'LOADERS', 'SYNTH_KINDS', 'MatrixSource', 'gradient_magnitude', 'load_matrix',
    'synth_matrix', 'GENERATORS', 'VOCAB', 'AddingDataset', 'AddingInstance',
    'Dataset', 'OrderDataset', 'OrderInstance', 'adding_target',
    'dataset_from_instances', 'gen_adding', 'gen_temporal_order', 'generate',
    'order_label', 'read_dataset', 'write_dataset',
]
