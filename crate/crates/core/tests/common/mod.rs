//! Reference values shared by the integration suites.

#![allow(dead_code)]

/// `(alpha, beta, x*, y*, tau*)`.
pub const EQUILIBRIA: [(f64, f64, f64, f64, f64); 9] = [
    (0.3, 0.3, 28.8782, 28.8782, 25.8012),
    (0.3, 0.6, 37.2949, 18.6474, 35.1706),
    (0.3, 0.9, 41.9183, 13.9728, 49.4039),
    (0.6, 0.3, 17.5118, 35.0237, 20.5978),
    (0.6, 0.6, 23.4108, 23.4108, 24.9072),
    (0.6, 0.9, 26.8631, 17.9087, 29.6255),
    (0.9, 0.3, 12.9723, 38.9169, 18.3737),
    (0.9, 0.6, 17.6832, 26.5248, 21.4466),
    (0.9, 0.9, 20.5381, 20.5381, 24.3089),
];

/// `(tau, max Re lambda)` at `alpha = 0.5`, `beta = 0.8`.
pub const DEFAULT_MAX_RE: [(f64, f64); 11] = [
    (25.0, -0.00386067),
    (26.0, -0.0029966),
    (27.0, -0.00222993),
    (28.0, -0.00154774),
    (29.0, -0.000939186),
    (30.0, -0.000395051),
    (31.0, 0.0000925033),
    (32.0, 0.000530187),
    (33.0, 0.000923769),
    (34.0, 0.00127823),
    (35.0, 0.00159789),
];

/// `(alpha, beta, tau, max Re lambda)` over the nine parameter blocks.
pub const MAX_RE_CELLS: [(f64, f64, f64, f64); 99] = [
    (0.3, 0.3, 20.0, -0.00686887),
    (0.3, 0.3, 21.0, -0.00526380),
    (0.3, 0.3, 22.0, -0.00387139),
    (0.3, 0.3, 23.0, -0.00265816),
    (0.3, 0.3, 24.0, -0.00159690),
    (0.3, 0.3, 25.0, -0.00066533),
    (0.3, 0.3, 26.0, 0.00015497),
    (0.3, 0.3, 27.0, 0.00087928),
    (0.3, 0.3, 28.0, 0.00152043),
    (0.3, 0.3, 29.0, 0.00208920),
    (0.3, 0.3, 30.0, 0.00259473),
    (0.3, 0.6, 30.0, -0.00237351),
    (0.3, 0.6, 31.0, -0.00181421),
    (0.3, 0.6, 32.0, -0.00130903),
    (0.3, 0.6, 33.0, -0.00085181),
    (0.3, 0.6, 34.0, -0.00043725),
    (0.3, 0.6, 35.0, -0.00006074),
    (0.3, 0.6, 36.0, 0.00028174),
    (0.3, 0.6, 37.0, 0.00059370),
    (0.3, 0.6, 38.0, 0.00087822),
    (0.3, 0.6, 39.0, 0.00113802),
    (0.3, 0.6, 40.0, 0.00137550),
    (0.3, 0.9, 45.0, -0.00076911),
    (0.3, 0.9, 46.0, -0.00057352),
    (0.3, 0.9, 47.0, -0.00039104),
    (0.3, 0.9, 48.0, -0.00022063),
    (0.3, 0.9, 49.0, -0.00006136),
    (0.3, 0.9, 50.0, 0.00008762),
    (0.3, 0.9, 51.0, 0.00022707),
    (0.3, 0.9, 52.0, 0.00035769),
    (0.3, 0.9, 53.0, 0.00048012),
    (0.3, 0.9, 54.0, 0.00059495),
    (0.3, 0.9, 55.0, 0.00070271),
    (0.6, 0.3, 15.0, -0.01148690),
    (0.6, 0.3, 16.0, -0.00853185),
    (0.6, 0.3, 17.0, -0.00607124),
    (0.6, 0.3, 18.0, -0.00400648),
    (0.6, 0.3, 19.0, -0.00226226),
    (0.6, 0.3, 20.0, -0.00078019),
    (0.6, 0.3, 21.0, 0.00048556),
    (0.6, 0.3, 22.0, 0.00157136),
    (0.6, 0.3, 23.0, 0.00250636),
    (0.6, 0.3, 24.0, 0.00331419),
    (0.6, 0.3, 25.0, 0.00401410),
    (0.6, 0.6, 20.0, -0.00560191),
    (0.6, 0.6, 21.0, -0.00412443),
    (0.6, 0.6, 22.0, -0.00284708),
    (0.6, 0.6, 23.0, -0.00173803),
    (0.6, 0.6, 24.0, -0.00077144),
    (0.6, 0.6, 25.0, 0.00007382),
    (0.6, 0.6, 26.0, 0.00081518),
    (0.6, 0.6, 27.0, 0.00146711),
    (0.6, 0.6, 28.0, 0.00204171),
    (0.6, 0.6, 29.0, 0.00254916),
    (0.6, 0.6, 30.0, 0.00299806),
    (0.6, 0.9, 25.0, -0.00312474),
    (0.6, 0.9, 26.0, -0.00229615),
    (0.6, 0.9, 27.0, -0.00156234),
    (0.6, 0.9, 28.0, -0.00091068),
    (0.6, 0.9, 29.0, -0.00033055),
    (0.6, 0.9, 30.0, 0.00018705),
    (0.6, 0.9, 31.0, 0.00064978),
    (0.6, 0.9, 32.0, 0.00106420),
    (0.6, 0.9, 33.0, 0.00143594),
    (0.6, 0.9, 34.0, 0.00176985),
    (0.6, 0.9, 35.0, 0.00207014),
    (0.9, 0.3, 13.0, -0.01396730),
    (0.9, 0.3, 14.0, -0.01012840),
    (0.9, 0.3, 15.0, -0.00701248),
    (0.9, 0.3, 16.0, -0.00445748),
    (0.9, 0.3, 17.0, -0.00234397),
    (0.9, 0.3, 18.0, -0.00058240),
    (0.9, 0.3, 19.0, 0.00089540),
    (0.9, 0.3, 20.0, 0.00214212),
    (0.9, 0.3, 21.0, 0.00319896),
    (0.9, 0.3, 22.0, 0.00409852),
    (0.9, 0.3, 23.0, 0.00486685),
    (0.9, 0.6, 16.0, -0.00957134),
    (0.9, 0.6, 17.0, -0.00709898),
    (0.9, 0.6, 18.0, -0.00502401),
    (0.9, 0.6, 19.0, -0.00327084),
    (0.9, 0.6, 20.0, -0.00178089),
    (0.9, 0.6, 21.0, -0.00050815),
    (0.9, 0.6, 22.0, 0.00058388),
    (0.9, 0.6, 23.0, 0.00152449),
    (0.9, 0.6, 24.0, 0.00233739),
    (0.9, 0.6, 25.0, 0.00304190),
    (0.9, 0.6, 26.0, 0.00365396),
    (0.9, 0.9, 20.0, -0.00478992),
    (0.9, 0.9, 21.0, -0.00339803),
    (0.9, 0.9, 22.0, -0.00219773),
    (0.9, 0.9, 23.0, -0.00115831),
    (0.9, 0.9, 24.0, -0.00025488),
    (0.9, 0.9, 25.0, 0.00053292),
    (0.9, 0.9, 26.0, 0.00122183),
    (0.9, 0.9, 27.0, 0.00182576),
    (0.9, 0.9, 28.0, 0.00235633),
    (0.9, 0.9, 29.0, 0.00282329),
    (0.9, 0.9, 30.0, 0.00323487),
];
