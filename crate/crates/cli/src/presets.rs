//! Built-in scenarios for the figure regimes.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: &'static str,
}

pub const PRESETS: [Preset; 6] = [
    Preset {
        name: "fig1-3",
        summary: "concurrence and discords from psi+ near the critical DM strength (vary D)",
        config: "\
J = 1
chi = 0.9
B = 2
b = 1
D = 1.6
T1 = 1.25
T2 = 0.75
gamma1 = 0.01
gamma2 = 0.01
gamma0_ratio = 200
geometry = direct
initial_state = bell_psi_plus
t_start = 0
t_end = 800
t_points = 401
",
    },
    Preset {
        name: "fig4-6-bell",
        summary: "psi+ dynamics at D = 1 (vary gamma0_ratio)",
        config: "\
J = 1
chi = 0.9
B = 2
b = 1
D = 1
T1 = 1.25
T2 = 0.75
gamma1 = 0.01
gamma2 = 0.01
gamma0_ratio = 1
geometry = direct
initial_state = bell_psi_plus
t_start = 0
t_end = 800
t_points = 401
",
    },
    Preset {
        name: "fig4-6-separable",
        summary: "separable state with nonzero discord at D = 1 (vary gamma0_ratio)",
        config: "\
J = 1
chi = 0.9
B = 2
b = 1
D = 1
T1 = 1.25
T2 = 0.75
gamma1 = 0.01
gamma2 = 0.01
gamma0_ratio = 1
geometry = direct
# 0.3 |psi+><psi+| + 0.7 I/4
initial_state = separable_nonzero_discord
t_start = 0
t_end = 800
t_points = 401
",
    },
    Preset {
        name: "fig7",
        summary: "asymptotic correlations at equal bath temperatures (sweep T)",
        config: "\
J = 1
chi = 0.9
B = 2
b = 2
D = 2
T1 = 1
T2 = 1
gamma1 = 0.01
gamma2 = 0.01
gamma0_ratio = 200
",
    },
    Preset {
        name: "fig8-direct",
        summary: "asymptotic correlations with the hot bath on the stronger field (sweep b > 0)",
        config: "\
J = 1
chi = 0.9
B = 2
b = 1
D = 2
T1 = 1.25
T2 = 0.75
gamma1 = 0.01
gamma2 = 0.01
gamma0_ratio = 200
geometry = direct
",
    },
    Preset {
        name: "fig8-indirect",
        summary: "asymptotic correlations with the hot bath on the weaker field (sweep b > 0)",
        config: "\
J = 1
chi = 0.9
B = 2
b = 1
D = 2
T1 = 0.75
T2 = 1.25
gamma1 = 0.01
gamma2 = 0.01
gamma0_ratio = 200
geometry = indirect
",
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn every_preset_parses() {
        for p in &PRESETS {
            parse_config(p.config, &[]).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }

    #[test]
    fn separable_preset_is_separable_with_discord() {
        let s = parse_config(find("fig4-6-separable").unwrap().config, &[]).unwrap();
        let rho = s.initial_state().unwrap();
        let r = pmdyn::correlations::report(&rho, &pmdyn::OptimizerConfig::default()).unwrap();
        assert_eq!(r.concurrence, 0.0);
        assert!(r.discord_a > 1e-3 && r.discord_b > 1e-3);
    }
}
