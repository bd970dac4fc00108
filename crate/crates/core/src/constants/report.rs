//! Flat JSON view of [`DerivedConstants`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DerivedConstants, LogPos, V2Integral};

/// One reported constant. `value` is present only when the constant fits
/// comfortably in an `f64`; `log10_value` is always present (`null` for
/// zero and infinity in JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub value: Option<f64>,
    pub log10_value: Option<f64>,
    pub representable: bool,
    /// Zero or infinite: the bound it belongs to carries no information.
    pub degenerate: bool,
    pub formula_ref: String,
}

impl ReportEntry {
    pub fn from_log(x: LogPos, formula: &str) -> Self {
        if x.is_zero() {
            return Self::from_value(0.0, formula);
        }
        let finite_log = x.ln().is_finite();
        let representable = x.is_representable();
        Self {
            value: representable.then(|| x.value()),
            log10_value: finite_log.then(|| x.log10()),
            representable,
            degenerate: !finite_log,
            formula_ref: formula.to_string(),
        }
    }

    pub fn from_value(x: f64, formula: &str) -> Self {
        if x > 0.0 {
            // Keep the exact double rather than a round trip through ln.
            let entry = Self::from_log(LogPos::new(x), formula);
            Self {
                value: entry.value.map(|_| x),
                ..entry
            }
        } else {
            Self {
                value: Some(x),
                log10_value: None,
                representable: true,
                degenerate: true,
                formula_ref: formula.to_string(),
            }
        }
    }

    /// `value` when representable, otherwise `10^log10_value`.
    pub fn as_f64(&self) -> f64 {
        match (self.value, self.log10_value) {
            (Some(v), _) => v,
            (None, Some(l)) => 10f64.powf(l),
            (None, None) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub target: String,
    pub beta: f64,
    pub d: usize,
    pub v2_integral: V2Integral,
    pub notes: Vec<String>,
    pub constants: BTreeMap<String, ReportEntry>,
}

impl ConstantsReport {
    pub fn get(&self, key: &str) -> Option<&ReportEntry> {
        self.constants.get(key)
    }
}

impl From<&DerivedConstants> for ConstantsReport {
    fn from(c: &DerivedConstants) -> Self {
        let mut out = BTreeMap::new();
        let mut put = |key: String, e: ReportEntry| {
            out.insert(key, e);
        };
        let v = |x: f64, f: &str| ReportEntry::from_value(x, f);
        let l = |x: LogPos, f: &str| ReportEntry::from_log(x, f);

        put("a_bar".into(), v(c.bar.a_bar, "a/2 if r>0, a_tilde if r=0"));
        put(
            "b_bar".into(),
            v(
                c.bar.b_bar,
                "(b + a/2) R^(r_bar+2) + K^2/(2a) if r>0, b_tilde if r=0",
            ),
        );
        put(
            "b_bar_prime".into(),
            v(
                c.bar.b_bar_prime,
                "b_bar + 2^(2/r) a_bar if r>0, b_tilde if r=0",
            ),
        );
        if let Some(radius) = c.bar.radius {
            put("R".into(), v(radius, "max{(4b/a)^(1/(r-r_bar)), 2^(1/r)}"));
        }
        put(
            "R_bar".into(),
            v(
                c.lipschitz.radius_bar,
                "(b/a)^(1/(r-r_bar)) if r>0, 0 if r=0",
            ),
        );
        put("L_bar".into(), v(c.lipschitz.l_bar, "L (1 + 2 R_bar)^r"));
        put(
            "C_grad".into(),
            v(c.lipschitz.c_grad, "2 max{2^(nu-1) L_grad, |grad h(0)|}"),
        );
        put(
            "L_grad_bar".into(),
            v(c.lipschitz.l_grad_bar, "3^(nu-1) L_grad"),
        );
        put(
            "lambda_max".into(),
            v(c.step_sizes.lambda_max, "min{1, a_bar^2/(8K^4), 1/a_bar^2}"),
        );
        put(
            "lambda_1_max".into(),
            v(c.step_sizes.lambda_1_max, "min{1, a_bar^2/(8K^4)}"),
        );

        let m = &c.moments;
        put("kappa".into(), v(m.kappa, "1/sqrt(2)"));
        put(
            "c_0".into(),
            v(m.c0, "a_bar kappa + 2 b_bar + 2 d/beta + 2 K^2"),
        );
        put(
            "kappa_star".into(),
            v(m.kappa_star, "min{kappa, kappa_tilde(2)/2}"),
        );
        for (p, row) in &m.rows {
            put(
                format!("M_1({p})"),
                l(
                    row.m1,
                    "4p C(p, floor(p/2)+1) (1 + 2 b_bar + 2 K^2)^p / min{1, a_bar}",
                ),
            );
            put(
                format!("kappa_tilde({p})"),
                v(row.kappa_tilde, "M_1^r / (2 (1 + M_1^(2r))^(1/2))"),
            );
            put(
                format!("M_2({p})"),
                l(
                    row.m2,
                    "[p(2p-1) 2^(2p-1) d/beta / (a_bar kappa_tilde(p))]^(1/2)",
                ),
            );
            put(
                format!("c_1({p})"),
                l(
                    row.c1,
                    "a_bar kappa_tilde M_1^(2p) + sum_k C(p,k) (2 b_bar + 2 K^2)^k M_1^(2p-2k)",
                ),
            );
            put(
                format!("c_2({p})"),
                l(
                    row.c2,
                    "c_1(p) + p(2p-1) 2^(2p-2) d/beta c_1(p-1) + p(2p-1) 2^(4p-3) beta^(-p) p! C(d/2+p-1, p)",
                ),
            );
            put(
                format!("c_3({p})"),
                l(row.c3, "c_2(p) + p(2p-1) 2^(2p-2) d/beta M_2^(2p-2)"),
            );
        }
        for (p, cs) in &m.c_star {
            put(
                format!("c_star({p})"),
                l(*cs, "1 + c_0 if p=0, c_0 if p=1, max{c_0, c_3(p)} if p>=2"),
            );
        }
        for (p, row) in &c.drift {
            put(
                format!("M_V({p})"),
                v(
                    row.m_v,
                    "(1 + (2 b_bar_prime + 2 (d+p-2)/beta)/a_bar)^(1/2)",
                ),
            );
            put(format!("c_V1({p})"), v(row.c_v1, "a_bar p/2"));
            put(format!("c_V2({p})"), l(row.c_v2, "(a_bar p/2) v_p(M_V(p))"));
        }

        let k = &c.contraction;
        put("R_bar_1".into(), v(k.r1, "2 (2 c_V2(2)/c_V1(2) - 1)^(1/2)"));
        put(
            "R_bar_2".into(),
            v(k.r2, "2 (4 c_V2(2) (1 + c_V1(2))/c_V1(2) - 1)^(1/2)"),
        );
        put(
            "epsilon_integral".into(),
            l(
                k.epsilon_integral,
                "int_0^R_bar_1 exp{(s sqrt(beta L_bar/8) + sqrt(8/(beta L_bar)))^2} ds",
            ),
        );
        put(
            "epsilon".into(),
            l(
                k.epsilon,
                "min{1, (4 c_V2(2) sqrt(2 pi beta/L_bar) epsilon_integral)^(-1)}",
            ),
        );
        put(
            "c_hat".into(),
            l(
                k.c_hat,
                "2 (1 + R_bar_2) exp{beta L_bar R_bar_2^2/8 + 2 R_bar_2}/epsilon",
            ),
        );
        put(
            "c_dot".into(),
            l(
                k.c_dot,
                "min{(R_bar_2 sqrt(8 pi beta/L_bar) exp{(R_bar_2 sqrt(beta L_bar/8) + sqrt(8/(beta L_bar)))^2})^(-1), c_V1(2)/2, 2 c_V2(2) epsilon c_V1(2)}",
            ),
        );

        let t = &c.theorem;
        put("C_bar_11".into(), l(t.c_bar_11, "16384 K^8"));
        put(
            "C_bar_21".into(),
            l(t.c_bar_21, "16384 K^8 (1 + c_star(4r+4) (1 + 1/(a_bar kappa_star))) + 2048 beta^(-4) d(d+2)(d+4)(d+6)"),
        );
        put("C_bar_12".into(), l(t.c_bar_12, "2^(2r+7) K^4"));
        put(
            "C_bar_22".into(),
            l(
                t.c_bar_22,
                "64 K^4 [2^(2r+1) + 2^(2r+1) c_star(2r+2) (1 + 1/(a_bar kappa_star)) + v_(4r+4)(M_V(4r+4))] + 32 beta^(-2) d(d+2)",
            ),
        );
        put(
            "C_bar_0".into(),
            l(
                t.c_bar_0,
                "e^(5 L_bar) (27 L_grad_bar^2/L_bar + L_grad_bar^2 C_bar_11/(2 L_bar) + 12 C_grad^2 K^2/L_bar + sqrt(2/beta) L^2 6^r 2^(2r-2) + sqrt(2/beta) L^2 6^r C_bar_12/2 + sqrt(2/beta) C_grad^2/2 + 4 K^2/L_bar)",
            ),
        );
        put(
            "C_bar_1".into(),
            l(
                t.c_bar_1,
                "C_bar_0 + e^(5 L_bar) (L_grad_bar^2/L_bar (27/2 + 27 c_star(2nu) w + C_bar_21/2) + 12 C_grad^2 K^2/L_bar (1 + c_star(nu+r+2) w) + sqrt(2/beta) L^2 6^r (2^(2r-2) (1 + c_star(2r) w) + v_(4r)(M_V(4r))/2 + C_bar_22/2) + sqrt(2/beta) C_grad^2/2 (8d(d+2) + 1 + c_star(2nu+2) w) + 2 K^2/L_bar (1 + 2 c_star(3r+1) w)), w = 1 + 1/(a_bar kappa_star)",
            ),
        );
        put(
            "C_bar_2".into(),
            l(t.c_bar_2, "c_hat e^C0 (1 + 1/C0) (C_bar_0 + 3)"),
        );
        put(
            "C_bar_3".into(),
            l(
                t.c_bar_3,
                "(2 c_hat e^(c_dot/2)/c_dot) [C_bar_1 + 27/4 + 3 c_star(2) (1 + 1/(a_bar kappa_star)) + 3/4 v_4(M_V(4))]",
            ),
        );
        put(
            "C0".into(),
            l(t.c0, "min{c_dot/4, a_bar/2, a_bar r/2, a_bar kappa_star/4}"),
        );
        put(
            "C1".into(),
            l(
                t.c1,
                "e^C0 [C_bar_0^(1/2) + C_bar_2 + c_hat (3 + v2_integral)]",
            ),
        );
        put("C2".into(), l(t.c2, "C_bar_1^(1/2) + C_bar_3"));
        put(
            "C_bar_4".into(),
            l(
                t.c_bar_4,
                "sqrt(2 c_hat) e^C3 (1 + 1/C3) (C_bar_0^(1/2) + 1/sqrt(2))",
            ),
        );
        put(
            "C_bar_5".into(),
            l(
                t.c_bar_5,
                "(4 sqrt(2 c_hat) e^(c_dot/4)/c_dot) (C_bar_1^(1/2) + (1 + 2 sqrt(2))/4 + sqrt(c_star(2)/2) (1 + 1/(a_bar kappa_star))^(1/2) + v_4(M_V(4))^(1/2)/4)",
            ),
        );
        put(
            "C3".into(),
            l(t.c3, "min{c_dot/8, a_bar/4, a_bar r/4, a_bar kappa_star/8}"),
        );
        put(
            "C4".into(),
            l(
                t.c4,
                "e^C3 [C_bar_0^(1/2) + C_bar_4 + sqrt(2 c_hat) (1 + (2 + v2_integral)^(1/2))]",
            ),
        );
        put("C5".into(), l(t.c5, "C_bar_1^(1/2) + C_bar_5"));

        let mut notes = vec![
            "Moment and increment constants use the decay exponent a_bar kappa_star throughout; the alternative exponent a_bar kappa_tilde(4r+4)/2 does not enter any constant.".to_string(),
            "C_bar_22 includes the Brownian fourth-moment term 32 beta^(-2) d(d+2).".to_string(),
            "epsilon is set to its largest admissible value.".to_string(),
        ];
        if c.assumptions.r == 0 {
            notes.push(
                "r = 0: the rates C0 and C3 vanish, so C_bar_2, C_bar_4, C1 and C4 are infinite and the bounds are degenerate.".to_string(),
            );
        }
        ConstantsReport {
            target: c.target.clone(),
            beta: c.beta,
            d: c.d,
            v2_integral: c.v2.clone(),
            notes,
            constants: out,
        }
    }
}
