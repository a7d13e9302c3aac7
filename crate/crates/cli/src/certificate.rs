//! Re-checkable claims carried by reports, and their replay.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use nilseq_core::automaton::PumpingWitness;
use nilseq_core::genpoly::{parse_gp, GpSequence, WeakPeriodicity};
use nilseq_core::ip::{
    contains_fs, ips_fixture_member, shifted_finite_sums, FnMembership, IpGenerators, IpsFamily, Membership,
    SeqMembership,
};
use nilseq_core::numeric::PrecisionPolicy;
use nilseq_core::orbit::{heisenberg_fracpart, heisenberg_hit, EpsilonSchedule};
use nilseq_core::recurrence::{fibonacci_like_set, pisot_cubic_check, quadratic_terms_below, QuadraticParams};
use nilseq_core::sparsity::{ConditionI, IpPlusWitness, IpsWitness, NormalForm, VerySparseDecomposition};
use nilseq_core::{Dfao, Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::inputs::parse_const;
use crate::report::RealRepr;

/// Membership predicate named inside a certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PredicateDef {
    /// Output 1 of an automaton.
    Automaton { automaton: Dfao },
    /// Nonzero values of an integer-valued generalised polynomial.
    Gp { expr: String },
    /// The built-in block set `2 {0,1}^t 0` in base 4.
    IpsFixture,
}

impl PredicateDef {
    pub fn membership(&self, policy: &PrecisionPolicy) -> Result<Box<dyn Membership>> {
        Ok(match self {
            PredicateDef::Automaton { automaton } => Box::new(automaton.clone()),
            PredicateDef::Gp { expr } => Box::new(SeqMembership(GpSequence::new(parse_gp(expr)?, None, *policy))),
            PredicateDef::IpsFixture => Box::new(FnMembership::new("ips fixture", ips_fixture_member)),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Certificate {
    /// The decomposition and the automaton agree on `[0, bound)`.
    VerySparse {
        automaton: Dfao,
        decomposition: VerySparseDecomposition,
        bound: u64,
    },
    ConditionI {
        certificate: ConditionI,
    },
    IpsWitness {
        automaton: Dfao,
        witness: IpsWitness,
        horizon: u64,
        depth: usize,
    },
    IpPlus {
        automaton: Dfao,
        witness: IpPlusWitness,
        depth: usize,
    },
    NormalForm {
        decomposition: VerySparseDecomposition,
        normal_form: NormalForm,
        bound: u128,
    },
    Pumping {
        automaton: Dfao,
        witness: PumpingWitness,
        t_max: usize,
    },
    /// `FS(n_1, …, n_depth)` lies in the set.
    FsContainment {
        predicate: PredicateDef,
        generators: Vec<u128>,
        depth: usize,
    },
    /// Every `N_t + n_α` with `t, |α| ≤ depth` lies in the set.
    ShiftedFamily {
        predicate: PredicateDef,
        family: IpsFamily,
        depth: usize,
    },
    GpValue {
        expr: String,
        n: String,
        exact_integer: Option<String>,
        value: RealRepr,
    },
    WeakPeriodicity {
        expr: String,
        modulus: Option<u64>,
        q: u64,
        r: u64,
        s: u64,
        horizon: u64,
    },
    /// `E′ ∩ [0, horizon] = (terms \ head) ∪ extra`, with `members`
    /// listing that set.
    FibonacciSet {
        a: u64,
        horizon: u64,
        members: Vec<u64>,
        head: Vec<u64>,
        extra: Vec<u64>,
    },
    /// Flagged `q` with their nearest lattice points; norms strictly decrease.
    BestApprox {
        a: i64,
        b: i64,
        records: Vec<(u64, i64, i64)>,
    },
    HeisenbergHit {
        alpha: String,
        beta: String,
        eps: String,
        n: u64,
    },
    HeisenbergFrac {
        alpha: String,
        beta: String,
        n: u64,
        gamma: [String; 3],
    },
}

fn fail(msg: impl Into<String>) -> Error {
    Error::VerificationFailed(msg.into())
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::VerySparse { .. } => "very_sparse",
            Certificate::ConditionI { .. } => "condition_i",
            Certificate::IpsWitness { .. } => "ips_witness",
            Certificate::IpPlus { .. } => "ip_plus",
            Certificate::NormalForm { .. } => "normal_form",
            Certificate::Pumping { .. } => "pumping",
            Certificate::FsContainment { .. } => "fs_containment",
            Certificate::ShiftedFamily { .. } => "shifted_family",
            Certificate::GpValue { .. } => "gp_value",
            Certificate::WeakPeriodicity { .. } => "weak_periodicity",
            Certificate::FibonacciSet { .. } => "fibonacci_set",
            Certificate::BestApprox { .. } => "best_approx",
            Certificate::HeisenbergHit { .. } => "heisenberg_hit",
            Certificate::HeisenbergFrac { .. } => "heisenberg_frac",
        }
    }

    /// Checks the claim without searching for anything.
    pub fn replay(&self, policy: &PrecisionPolicy) -> Result<()> {
        match self {
            Certificate::VerySparse {
                automaton,
                decomposition,
                bound,
            } => {
                let members = decomposition.members_below(*bound as u128);
                for n in 0..*bound {
                    if members.contains(&(n as u128)) != (automaton.eval(n) == 1) {
                        return Err(fail(format!("decomposition and automaton differ at {n}")));
                    }
                }
                Ok(())
            }
            Certificate::ConditionI { certificate } => certificate
                .check()
                .then_some(())
                .ok_or_else(|| fail("condition (i) words do not check")),
            Certificate::IpsWitness {
                automaton,
                witness,
                horizon,
                depth,
            } => witness.verify(automaton, *horizon, *depth),
            Certificate::IpPlus {
                automaton,
                witness,
                depth,
            } => witness.verify(automaton, *depth),
            Certificate::NormalForm {
                decomposition,
                normal_form,
                bound,
            } => normal_form.verify(decomposition, *bound),
            Certificate::Pumping {
                automaton,
                witness,
                t_max,
            } => witness
                .holds_for(automaton, *t_max)
                .then_some(())
                .ok_or_else(|| fail("pumped words change the output")),
            Certificate::FsContainment {
                predicate,
                generators,
                depth,
            } => {
                let pred = predicate.membership(policy)?;
                let gen = IpGenerators::new(generators.clone())?;
                let chk = contains_fs(pred.as_ref(), &gen, *depth)?;
                match chk.first_failure {
                    None => Ok(()),
                    Some((alpha, v)) => Err(fail(format!("n_α = {v} for α = {alpha:?} is not a member"))),
                }
            }
            Certificate::ShiftedFamily {
                predicate,
                family,
                depth,
            } => {
                let pred = predicate.membership(policy)?;
                for s in shifted_finite_sums(family, *depth)? {
                    if !pred.member(s.value)? {
                        return Err(fail(format!(
                            "N_{} + n_{:?} = {} is not a member",
                            s.t, s.alpha, s.value
                        )));
                    }
                }
                Ok(())
            }
            Certificate::GpValue {
                expr,
                n,
                exact_integer,
                value,
            } => {
                let n: BigInt = n.parse().map_err(|_| fail("bad n"))?;
                let e = parse_gp(expr)?;
                let p = PrecisionPolicy {
                    start_bits: value.bits,
                    ..*policy
                };
                let v = e.eval(&n, &p)?;
                if v.exact_integer.map(|x| x.to_string()) != *exact_integer {
                    return Err(fail("exact integer value differs"));
                }
                let again = RealRepr::new(&v.value, &p)?;
                if again.enclosure != value.enclosure {
                    return Err(fail("enclosure differs"));
                }
                Ok(())
            }
            Certificate::WeakPeriodicity {
                expr,
                modulus,
                q,
                r,
                s,
                horizon,
            } => {
                let seq = GpSequence::new(parse_gp(expr)?, *modulus, *policy);
                let w = WeakPeriodicity::Witness { q: *q, r: *r, s: *s };
                w.verify(&seq, *horizon)?
                    .then_some(())
                    .ok_or_else(|| fail("f(qn + r) = f(qn + s) fails"))
            }
            Certificate::FibonacciSet {
                a,
                horizon,
                members,
                head,
                extra,
            } => {
                let params = QuadraticParams::new(*a)?;
                let pred = fibonacci_like_set(&params);
                let terms: BTreeSet<u64> = quadratic_terms_below(*a, *horizon).into_iter().collect();
                let mut expect: BTreeSet<u64> = terms.clone();
                for h in head.iter().collect::<BTreeSet<_>>() {
                    if !expect.remove(h) {
                        return Err(fail(format!("head element {h} is not a term")));
                    }
                    if pred.eval(&BigInt::from(*h), policy)? {
                        return Err(fail(format!("head term {h} satisfies the predicate")));
                    }
                }
                expect.extend(extra.iter().copied());
                let got: BTreeSet<u64> = members.iter().copied().collect();
                if got != expect {
                    return Err(fail("members differ from terms without head plus extra"));
                }
                for m in members {
                    if !pred.eval(&BigInt::from(*m), policy)? {
                        return Err(fail(format!("{m} fails the predicate")));
                    }
                }
                Ok(())
            }
            Certificate::BestApprox { a, b, records } => {
                let params = pisot_cubic_check(*a, *b)?;
                let mut prev = None;
                for &(q, p1, p2) in records {
                    let (p, v) = params.lattice_min(&BigInt::from(q))?;
                    if p != (BigInt::from(p1), BigInt::from(p2)) {
                        return Err(fail(format!("nearest lattice point for q = {q} differs")));
                    }
                    if let Some(pv) = &prev {
                        if v.compare(pv) != Ordering::Less {
                            return Err(fail(format!("norm does not decrease at q = {q}")));
                        }
                    }
                    prev = Some(v);
                }
                Ok(())
            }
            Certificate::HeisenbergHit { alpha, beta, eps, n } => {
                let (a, b) = (parse_const(alpha)?, parse_const(beta)?);
                let eps = EpsilonSchedule::parse(eps)?;
                heisenberg_hit(&a, &b, &eps, *n, policy)?
                    .map(|_| ())
                    .ok_or_else(|| fail(format!("n = {n} is not a hit")))
            }
            Certificate::HeisenbergFrac { alpha, beta, n, gamma } => {
                let (a, b) = (parse_const(alpha)?, parse_const(beta)?);
                let h = heisenberg_fracpart(&a, &b, *n, policy)?;
                if !h.agree {
                    return Err(fail("closed form and lattice reduction disagree"));
                }
                let g: Vec<String> = h.gamma.iter().map(|x| x.to_string()).collect();
                (g == gamma.to_vec())
                    .then_some(())
                    .ok_or_else(|| fail("lattice element differs"))
            }
        }
    }
}
