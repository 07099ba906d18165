//! Built-in named configurations, one per reproduced figure family.

pub struct Recipe {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: &'static str,
    /// Default detector distance for `farfield`, m.
    pub farfield_z: Option<f64>,
    /// Default trajectories per slit for `carpet`.
    pub trajectories: Option<usize>,
}

const FOUR_SLITS: &str = r#"
[beam]
mass = "neutron"
wavelength = 5e-9

[grating]
n_slits = 4
period = 5e-8
sigma = 5e-9
"#;

const SIXTY_FOUR_SLITS: &str = r#"
[beam]
mass = "neutron"
wavelength = 5e-9

[grating]
n_slits = 64
period = 5e-8
sigma = 5e-9
"#;

pub const RECIPES: &[Recipe] = &[
    Recipe {
        name: "fig4",
        summary: "4 slits, transient region x in (0, 1.4 um), z in (50 nm, 3.8 um)",
        config: concat!(
            "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n",
            "[grating]\nn_slits = 4\nperiod = 5e-8\nsigma = 5e-9\n",
            "[grid]\nx_min = 0.0\nx_max = 1.4e-6\nnx = 1024\nz_min = 5e-8\nz_max = 3.8e-6\nnz = 1024\n",
        ),
        farfield_z: None,
        trajectories: None,
    },
    Recipe {
        name: "fig5",
        summary: "4 slits, far-field cross-section at z = 4 mm",
        config: FOUR_SLITS,
        farfield_z: Some(0.004),
        trajectories: None,
    },
    Recipe {
        name: "fig6",
        summary: "4 slits, near field x in (0, 300 nm), z in (0.8 nm, 200 nm)",
        config: concat!(
            "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n",
            "[grating]\nn_slits = 4\nperiod = 5e-8\nsigma = 5e-9\n",
            "[grid]\nx_min = 0.0\nx_max = 3e-7\nnx = 1024\nz_min = 8e-10\nz_max = 2e-7\nnz = 1024\n",
        ),
        farfield_z: None,
        trajectories: None,
    },
    Recipe {
        name: "fig7",
        summary: "4 slits, d = 10 lambda, carpet over one Talbot length with trajectories",
        config: FOUR_SLITS,
        farfield_z: None,
        trajectories: Some(8),
    },
    Recipe {
        name: "fig8",
        summary: "64 slits, d = 10 lambda, carpet over one Talbot length with trajectories",
        config: SIXTY_FOUR_SLITS,
        farfield_z: None,
        trajectories: Some(8),
    },
    Recipe {
        name: "fig9",
        summary: "64 slits, far-field cross-section at z = 1.25 m",
        config: SIXTY_FOUR_SLITS,
        farfield_z: Some(1.25),
        trajectories: None,
    },
    Recipe {
        name: "fig10",
        summary: "64 slits, d = 10 lambda = 50 nm, central carpet, z_T = 1000 nm",
        config: concat!(
            "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n",
            "[grating]\nn_slits = 64\nperiod = 5e-8\nsigma = 5e-9\n",
            "[grid]\nx_min = -1e-7\nx_max = 1e-7\nz_min = 1e-9\nz_max = 1e-6\n",
        ),
        farfield_z: None,
        trajectories: None,
    },
    Recipe {
        name: "fig11",
        summary: "64 slits, d = 20 lambda = 100 nm, central carpet, z_T = 4000 nm",
        config: concat!(
            "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n",
            "[grating]\nn_slits = 64\nperiod = 1e-7\nsigma = 5e-9\n",
            "[grid]\nx_min = -2e-7\nx_max = 2e-7\nz_min = 4e-9\nz_max = 4e-6\n",
        ),
        farfield_z: None,
        trajectories: None,
    },
    Recipe {
        name: "fig12",
        summary: "64 slits, d = 40 lambda = 200 nm, first quarter of z_T = 16000 nm",
        config: concat!(
            "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n",
            "[grating]\nn_slits = 64\nperiod = 2e-7\nsigma = 5e-9\n",
            "[grid]\nx_min = -4e-7\nx_max = 4e-7\nz_min = 1.6e-8\nz_max = 4e-6\n",
        ),
        farfield_z: None,
        trajectories: None,
    },
    Recipe {
        name: "fig13",
        summary: "64 slits, d = 10 lambda, domain for the midpoint cross-section over one Talbot length",
        config: concat!(
            "[beam]\nmass = \"neutron\"\nwavelength = 5e-9\n",
            "[grating]\nn_slits = 64\nperiod = 5e-8\nsigma = 5e-9\n",
            "[grid]\nx_min = -1e-7\nx_max = 1e-7\nz_min = 1e-9\nz_max = 1e-6\nnx = 2048\nnz = 2048\n",
        ),
        farfield_z: None,
        trajectories: None,
    },
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    RECIPES.iter().find(|r| r.name.eq_ignore_ascii_case(name))
}
