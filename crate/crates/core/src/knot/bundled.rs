use super::KnotCurve;

const CURVES: &[(&str, &str)] = &[
    ("circle", include_str!("../../data/curves/circle.json")),
    ("trefoil", include_str!("../../data/curves/trefoil.json")),
    (
        "trefoil_perturbed",
        include_str!("../../data/curves/trefoil_perturbed.json"),
    ),
    (
        "torus_2_5",
        include_str!("../../data/curves/torus_2_5.json"),
    ),
    (
        "figure_eight",
        include_str!("../../data/curves/figure_eight.json"),
    ),
    ("hopf_a", include_str!("../../data/curves/hopf_a.json")),
    ("hopf_b", include_str!("../../data/curves/hopf_b.json")),
    (
        "unlinked_a",
        include_str!("../../data/curves/unlinked_a.json"),
    ),
    (
        "unlinked_b",
        include_str!("../../data/curves/unlinked_b.json"),
    ),
];

/// Names of the curves shipped with the library.
pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    CURVES.iter().map(|(name, _)| *name)
}

/// JSON text of a shipped curve.
pub fn bundled_json(name: &str) -> Option<&'static str> {
    CURVES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn bundled_curve(name: &str) -> Option<KnotCurve> {
    bundled_json(name).map(|text| KnotCurve::from_json(text).expect("shipped curves parse"))
}
