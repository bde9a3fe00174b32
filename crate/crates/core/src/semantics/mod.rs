//! Presheaves of senses over a workspace, the sheaf condition on cover
//! sieves, and the subobject classifier.

mod classifier;
mod presheaf;
mod sheaf;

pub use classifier::{
    classify, classify_entry, is_principal, omega_at, omega_sheaf_at, verify_classifier,
    Classified, ClassifierReport,
};
pub use presheaf::{
    initial_presheaf, presheaf_skeleton, terminal_presheaf, validate_presheaf,
    validate_subpresheaf, Presheaf, PresheafFile, SubPresheaf,
};
pub use sheaf::{
    gluing_at, induced_family, matching_families, sheaf_check_equalizer, sheaf_check_equalizer_all,
    sheaf_check_local, EqualizerVerdict, GluingVerdict, MatchingFamily, SheafReport, MAX_PRODUCT,
};
