"""altknot: alternating augmentations of link diagrams with certified
twist-number and volume bounds."""

__version__ = "0.1.0"

from .analysis import (
    DiagramFlags,
    EdgeClassification,
    PrimalityWitness,
    RefinementReport,
    RegionTopology,
    ShadingClasses,
    TwistPartition,
    TwistRegion,
    analysis_report,
    classify_edges,
    detect_two_strand_torus,
    diagram_flags,
    refinement_check,
    shading_classes,
    twist_partition,
    twist_region_topology,
)
from .augmentation import (
    AugmentationResult,
    CutCurve,
    CutSystem,
    HyperbolicityCertificate,
    MergeArc,
    augment,
    build_cut_curves,
    certify_hyperbolic,
    find_merge_arc,
    join_curves,
    overlay_unlink,
    propagate_finger,
)
from .diagram import (
    Crossing,
    Diagram,
    Edge,
    Face,
    Sign,
    ValidationReport,
    drop_component,
    end_labels,
    face_set,
    faces,
    flip_crossing,
    parse_pd,
    same_map,
    serialize_pd,
    subdivide_edge_with_crossing,
    validate_diagram,
)
from .generate import braid_closure, random_knot_diagram, two_strand_torus
from .reduction import (
    ReductionTrace,
    preprocess,
    remove_nugatory_crossing,
    remove_r2_bigon,
)
from .render import render_svg
from .volume import (
    VolumeBounds,
    VolumeConstants,
    augmented_volume_bounds,
    catalan_reference,
    constants,
    twist_volume_bounds,
    volume_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
