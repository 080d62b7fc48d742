//! Transcribed symbolic targets per fixture.

use super::{Expected, OmegaShape, Printed, Restriction, SignRule, StatementTarget, Target};
use crate::datum::RootKind;
use crate::engine::{ColorData, LFactor};

fn lf(coweight: &[i64], sign: i64, r2: i64, exponent: i64) -> LFactor {
    LFactor {
        sign,
        r2,
        coweight: coweight.to_vec(),
        exponent,
    }
}

/// −e^{lead} ∏ (1 − σ t^{r2} e^{−v̌}) / (1 − σ t^{r2} e^{v̌}).
fn ratio_display(lead: &[i64], parts: &[(&[i64], i64, i64)]) -> Printed {
    let mut factors = Vec::new();
    for (v, sign, r2) in parts {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        factors.push(lf(&neg, *sign, *r2, 1));
        factors.push(lf(v, *sign, *r2, -1));
    }
    Printed {
        coeff: -1,
        lead: lead.to_vec(),
        factors,
    }
}

/// Both signs of every listed weight, entering with exponent −1.
fn weights_pm(ws: &[&[i64]], r2: i64) -> Vec<LFactor> {
    ws.iter()
        .flat_map(|w| {
            let neg: Vec<i64> = w.iter().map(|x| -x).collect();
            [lf(w, 1, r2, -1), lf(&neg, 1, r2, -1)]
        })
        .collect()
}

fn target(name: &str, citation: &str, expected: Expected) -> Target {
    Target {
        name: name.into(),
        citation: citation.into(),
        expected,
    }
}

fn weyl_order(n: usize, kind: &str) -> Target {
    target(
        "weyl-order",
        &format!("|W_X| = {n} for Φ_X of type {kind}"),
        Expected::WeylOrder(n),
    )
}

fn casselman_shalika(rho: &[i64]) -> Target {
    let shift: Vec<i64> = rho.iter().map(|x| -x).collect();
    target(
        "omega-shape",
        "Shintani–Casselman–Shalika formula: δ^{−1/2}(x_λ̌) e^{ρ̌}(χ) Σ_W σ(w) e^{−ρ̌+λ̌}(^wχ)",
        Expected::Omega(OmegaShape {
            sign: SignRule::Length,
            factors: vec![],
            shift,
            outer: rho.to_vec(),
            up_to_factor: false,
        }),
    )
}

fn macdonald(pos: &[&[i64]]) -> Target {
    let factors = pos
        .iter()
        .flat_map(|a| [lf(a, 1, 2, 1), lf(a, 1, 0, -1)])
        .collect();
    target(
        "omega-shape",
        "Macdonald's formula: δ^{−1/2}(x_λ̌) Σ_W ∏_{α̌>0} (1 − q^{−1}e^{α̌})/(1 − e^{α̌}) e^{λ̌}(^wχ), up to a factor independent of λ̌",
        Expected::Omega(OmegaShape {
            sign: SignRule::Trivial,
            factors,
            shift: vec![0; pos[0].len()],
            outer: vec![0; pos[0].len()],
            up_to_factor: true,
        }),
    )
}

fn adjoint_at_one(name: &str, pos: &[&[i64]]) -> Target {
    target(
        "l-multiset",
        &format!("L(π,Ad,0)·L_X = L(π,Ad,1) up to ζ-factors for {name}"),
        Expected::LMultiset(weights_pm(pos, 2)),
    )
}

/// Targets and path names of a fixture.
pub(super) fn targets_for(name: &str) -> (Vec<Target>, Vec<&'static str>) {
    match name {
        "whittaker-a1" => (
            vec![weyl_order(2, "A1"), casselman_shalika(&[1])],
            vec![],
        ),
        "whittaker-a2" => (
            vec![weyl_order(6, "A2"), casselman_shalika(&[2, 2])],
            vec![],
        ),
        "group-a1" => (
            vec![
                weyl_order(2, "A1"),
                macdonald(&[&[2]]),
                adjoint_at_one("the group PGL_2", &[&[2]]),
            ],
            vec![],
        ),
        "group-a2" => {
            let pos: &[&[i64]] = &[&[2, 0], &[0, 2], &[2, 2]];
            (
                vec![
                    weyl_order(6, "A2"),
                    macdonald(pos),
                    adjoint_at_one("the group PGL_3", pos),
                ],
                vec![],
            )
        }
        "shalika-gl4" => {
            let short = [[2, 0], [2, 2]];
            let shape = OmegaShape {
                sign: SignRule::Length,
                factors: short.iter().map(|a| lf(a, 1, 2, 1)).collect(),
                shift: vec![-4, -3],
                outer: vec![0, 0],
                up_to_factor: true,
            };
            (
                vec![
                    weyl_order(8, "C2"),
                    target(
                        "omega-shape",
                        "unramified Shalika function: δ^{−1/2}(x_λ̌) Σ_{W_X} σ(w) ∏_{α∈Φ^S_{Sp_4}, α>0} (1 − q^{−1}e^{α̌}) e^{−ρ̌+λ̌}(^wχ), up to a factor independent of λ̌",
                        Expected::Omega(shape),
                    ),
                ],
                vec![],
            )
        }
        "triple-product" => {
            let theta = [[1, 1, -1], [1, -1, 1], [-1, 1, 1], [1, 1, 1]];
            let shape = OmegaShape {
                sign: SignRule::Length,
                factors: theta.iter().map(|v| lf(v, 1, 1, 1)).collect(),
                shift: vec![-1, -1, -1],
                outer: vec![0, 0, 0],
                up_to_factor: true,
            };
            (
                vec![
                    weyl_order(8, "A1×A1×A1"),
                    target(
                        "omega-shape",
                        "PGL_2\\PGL_2^3: δ^{−1/2}(x_λ̌) Σ_W σ(w) ∏_{θ̌} (1 − q^{−1/2}e^{θ̌}) e^{−ρ̌+λ̌}(^wχ), up to a factor independent of λ̌",
                        Expected::Omega(shape),
                    ),
                ],
                vec![],
            )
        }
        "gp-so3-so4" => {
            let w: &[&[i64]] = &[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[-1, 1, 1]];
            (
                vec![
                    weyl_order(8, "A1×A1×A1"),
                    target(
                        "l-multiset",
                        "SO_3\\SO_3×SO_4: L(π,Ad,0)·L_X = L(π₁⊗π₂,½) up to ζ-factors",
                        Expected::LMultiset(weights_pm(w, 1)),
                    ),
                ],
                vec![],
            )
        }
        "gl2-sl3" => (
            vec![
                weyl_order(2, "A1"),
                target(
                    "bw",
                    "GL_n\\SL_{n+1}, n = 2: B_{w_γ} with α̌₁, α̌ₙ restricted to γ̌/2",
                    Expected::Bw {
                        word: vec![0],
                        printed: ratio_display(&[2], &[(&[1], 1, 2), (&[1], 1, 2)]),
                    },
                ),
                target(
                    "path",
                    "GL_n\\SL_{n+1}, n = 2: B_{w_γ} = −e^{γ̌}(1 − q^{−1}e^{−α̌₁})(1 − q^{−1}e^{−α̌₂})/((1 − q^{−1}e^{α̌₁})(1 − q^{−1}e^{α̌₂}))",
                    Expected::Path {
                        index: 0,
                        printed: ratio_display(&[2, 2], &[(&[2, 0], 1, 2), (&[0, 2], 1, 2)]),
                        restriction: None,
                    },
                ),
            ],
            vec!["sl2-sl3"],
        ),
        "gl3-sl4" => (
            vec![
                weyl_order(2, "A1"),
                target(
                    "bw",
                    "GL_n\\SL_{n+1}, n = 3: B_{w_γ} with α̌₁, α̌ₙ restricted to γ̌/2",
                    Expected::Bw {
                        word: vec![0],
                        printed: ratio_display(&[2], &[(&[1], 1, 3), (&[1], 1, 3)]),
                    },
                ),
            ],
            vec![],
        ),
        "sp4-gl4" => (
            vec![
                weyl_order(2, "A1"),
                adjoint_at_one("Sp_4\\GL_4 with dual group GL_2", &[&[2, -2]]),
            ],
            vec![],
        ),
        "sp2xsp2-sp4" => {
            let restricted = ratio_display(&[2], &[(&[1], 1, 3), (&[1], 1, 1)]);
            (
                vec![
                    weyl_order(2, "A1"),
                    target(
                        "bw",
                        "Sp_2×Sp_2\\Sp_4, split: `b_w = −e^{γ̌'}(1 − q^{−3/2}e^{−γ̌'/2})(1 − q^{−1/2}e^{−γ̌'/2})/((1 − q^{−3/2}e^{γ̌'/2})(1 − q^{−1/2}e^{γ̌'/2}))",
                        Expected::Bw {
                            word: vec![0],
                            printed: restricted.clone(),
                        },
                    ),
                    target(
                        "path",
                        "Sp_2×Sp_2\\Sp_4, split: `b_w = −e^{2α̌+β̌}(1 − q^{−1}e^{−α̌})(1 − q^{−1}e^{−α̌−β̌})/((1 − q^{−1}e^{α̌})(1 − q^{−1}e^{α̌+β̌})), with χ = e^{β/2}χ'",
                        Expected::Path {
                            index: 0,
                            printed: ratio_display(&[4, 2], &[(&[2, 0], 1, 2), (&[2, 2], 1, 2)]),
                            restriction: Some(Restriction {
                                images: vec![vec![1], vec![0]],
                                shifts: vec![-1, 2],
                                printed: restricted,
                            }),
                        },
                    ),
                    target(
                        "l-multiset",
                        "Sp_2×Sp_2\\Sp_4: L(π,Ad,0)·L_X = L(π,½)L(π,3/2) up to ζ-factors",
                        Expected::LMultiset(
                            [weights_pm(&[&[1]], 1), weights_pm(&[&[1]], 3)].concat(),
                        ),
                    ),
                ],
                vec!["sp2-sp4"],
            )
        }
        _ => (vec![], vec![]),
    }
}

fn g_statement(name: &str, citation: &str, r2: i64) -> StatementTarget {
    StatementTarget {
        name: name.into(),
        citation: citation.into(),
        kind: RootKind::G,
        color: ColorData {
            theta: vec![2],
            r2_a: r2,
            r2_b: r2,
        },
        printed: ratio_display(&[2], &[(&[2], 1, r2)]),
    }
}

fn half_statement(name: &str, citation: &str, kind: RootKind, a: i64, b: i64) -> StatementTarget {
    let sign_b = if kind == RootKind::TNonsplit { -1 } else { 1 };
    StatementTarget {
        name: name.into(),
        citation: citation.into(),
        kind,
        color: ColorData {
            theta: vec![1],
            r2_a: a,
            r2_b: b,
        },
        printed: ratio_display(&[2], &[(&[1], 1, a), (&[1], sign_b, b)]),
    }
}

/// Displayed rank-one B_{w_γ} for varieties without a full datum in the catalog.
pub fn statement_targets() -> Vec<StatementTarget> {
    vec![
        g_statement(
            "sp4-sl4",
            "Sp_4\\SL_4: B_{w_γ} = −e^{γ̌}(1 − q^{−2}e^{−γ̌})/(1 − q^{−2}e^{γ̌})",
            4,
        ),
        g_statement(
            "g2-spin7",
            "G_2\\Spin_7: B_{w_γ} = −e^{γ̌}(1 − q^{−3}e^{−γ̌})/(1 − q^{−3}e^{γ̌})",
            6,
        ),
        g_statement(
            "spin7-spin8",
            "Spin_{2n−1}\\Spin_{2n}, n = 4: B_{w_γ} = −e^{γ̌}(1 − q^{−n+1}e^{−γ̌})/(1 − q^{−n+1}e^{γ̌})",
            6,
        ),
        g_statement(
            "spin9-spin10",
            "Spin_{2n−1}\\Spin_{2n}, n = 5: B_{w_γ} = −e^{γ̌}(1 − q^{−n+1}e^{−γ̌})/(1 − q^{−n+1}e^{γ̌})",
            8,
        ),
        half_statement(
            "spin4-spin5",
            "Spin_{2n}\\Spin_{2n+1}, n = 2: factors q^{−n} and q^{−1/2} at ±γ̌/2",
            RootKind::TSplit,
            4,
            1,
        ),
        half_statement(
            "spin6-spin7",
            "Spin_{2n}\\Spin_{2n+1}, n = 3: factors q^{−n} and q^{−1/2} at ±γ̌/2",
            RootKind::TSplit,
            6,
            1,
        ),
        half_statement(
            "sp2xsp2-sp4-split",
            "Sp_2×Sp_2\\Sp_4, split: factors q^{−3/2} and q^{−1/2} at ±γ̌'/2",
            RootKind::TSplit,
            3,
            1,
        ),
        half_statement(
            "sp2xsp2-sp4-nonsplit",
            "Res_{E/k}Sp_2\\Sp_4: factors (1 − q^{−3/2}e^{∓γ̌'/2}) and (1 + q^{−1/2}e^{∓γ̌'/2})",
            RootKind::TNonsplit,
            3,
            1,
        ),
        half_statement(
            "sp2xsp4-sp6",
            "Sp_2×Sp_{2n−2}\\Sp_{2n}, n = 3: factors q^{−n+3/2} and q^{−n+1/2} at ±γ̌/2",
            RootKind::TSplit,
            3,
            5,
        ),
    ]
}
