use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::formula::{Ltl, Prop, Supply, Var};

use super::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Xor,
    Next,
    Until,
    WeakUntil,
    Eventually,
    Globally,
}

impl Op {
    pub const ALL: [Op; 11] = [
        Op::Not,
        Op::And,
        Op::Or,
        Op::Implies,
        Op::Iff,
        Op::Xor,
        Op::Next,
        Op::Until,
        Op::WeakUntil,
        Op::Eventually,
        Op::Globally,
    ];

    pub fn arity(self) -> usize {
        match self {
            Op::Not | Op::Next | Op::Eventually | Op::Globally => 1,
            _ => 2,
        }
    }
}

/// Formula trees the sampler can build.
pub trait Tree: Sized {
    fn supports(op: Op) -> bool;
    fn to_wire(&self) -> String;
    fn var(v: Var) -> Self;
    fn constant(value: bool) -> Self;
    fn unary(op: Op, a: Self) -> Self;
    fn binary(op: Op, a: Self, b: Self) -> Self;
}

impl Tree for Ltl {
    fn supports(op: Op) -> bool {
        !matches!(op, Op::Iff | Op::Xor)
    }

    fn to_wire(&self) -> String {
        self.to_polish()
    }

    fn var(v: Var) -> Ltl {
        Ltl::Prop(v)
    }

    fn constant(value: bool) -> Ltl {
        if value {
            Ltl::True
        } else {
            Ltl::False
        }
    }

    fn unary(op: Op, a: Ltl) -> Ltl {
        match op {
            Op::Not => Ltl::not(a),
            Op::Next => Ltl::next(a),
            Op::Eventually => Ltl::eventually(a),
            Op::Globally => Ltl::globally(a),
            _ => unreachable!("{op:?} is binary"),
        }
    }

    fn binary(op: Op, a: Ltl, b: Ltl) -> Ltl {
        match op {
            Op::And => Ltl::and(a, b),
            Op::Or => Ltl::or(a, b),
            Op::Implies => Ltl::implies(a, b),
            Op::Until => Ltl::until(a, b),
            Op::WeakUntil => Ltl::weak_until(a, b),
            _ => unreachable!("{op:?} is not a binary LTL operator"),
        }
    }
}

impl Tree for Prop {
    fn supports(op: Op) -> bool {
        matches!(op, Op::Not | Op::And | Op::Or | Op::Implies | Op::Iff | Op::Xor)
    }

    fn to_wire(&self) -> String {
        self.to_polish()
    }

    fn var(v: Var) -> Prop {
        Prop::Var(v)
    }

    fn constant(value: bool) -> Prop {
        if value {
            Prop::True
        } else {
            Prop::False
        }
    }

    fn unary(op: Op, a: Prop) -> Prop {
        match op {
            Op::Not => Prop::not(a),
            _ => unreachable!("{op:?} is not a unary propositional operator"),
        }
    }

    fn binary(op: Op, a: Prop, b: Prop) -> Prop {
        match op {
            Op::And => Prop::and(a, b),
            Op::Or => Prop::or(a, b),
            Op::Implies => Prop::implies(a, b),
            Op::Iff => Prop::iff(a, b),
            Op::Xor => Prop::xor(a, b),
            _ => unreachable!("{op:?} is not a binary propositional operator"),
        }
    }
}

/// Relative node weights. Each proposition has weight `prop`; each of the
/// two constants has `prop / constant_factor`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeWeights {
    pub prop: f64,
    pub constant_factor: f64,
    pub not: f64,
    pub and: f64,
    pub or: f64,
    pub implies: f64,
    pub iff: f64,
    pub xor: f64,
    pub next: f64,
    pub until: f64,
    pub weak_until: f64,
    pub eventually: f64,
    pub globally: f64,
}

impl NodeWeights {
    const ZERO: NodeWeights = NodeWeights {
        prop: 1.0,
        constant_factor: 2.5,
        not: 0.0,
        and: 0.0,
        or: 0.0,
        implies: 0.0,
        iff: 0.0,
        xor: 0.0,
        next: 0.0,
        until: 0.0,
        weak_until: 0.0,
        eventually: 0.0,
        globally: 0.0,
    };

    /// `! & X U` with equal weight.
    pub fn ltl() -> NodeWeights {
        NodeWeights { not: 1.0, and: 1.0, next: 1.0, until: 1.0, ..NodeWeights::ZERO }
    }

    /// `& | !` with equal weight, `<->` and `xor` at half of it.
    pub fn prop() -> NodeWeights {
        NodeWeights { not: 1.0, and: 1.0, or: 1.0, iff: 0.5, xor: 0.5, ..NodeWeights::ZERO }
    }

    pub fn weight(&self, op: Op) -> f64 {
        match op {
            Op::Not => self.not,
            Op::And => self.and,
            Op::Or => self.or,
            Op::Implies => self.implies,
            Op::Iff => self.iff,
            Op::Xor => self.xor,
            Op::Next => self.next,
            Op::Until => self.until,
            Op::WeakUntil => self.weak_until,
            Op::Eventually => self.eventually,
            Op::Globally => self.globally,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let all = Op::ALL.iter().map(|&op| self.weight(op)).chain([self.prop]);
        if all.clone().any(|w| !w.is_finite() || w < 0.0) {
            return Err(ConfigError::new("node weights must be finite and non-negative"));
        }
        if self.prop <= 0.0 {
            return Err(ConfigError::new("the proposition weight must be positive"));
        }
        if !self.constant_factor.is_finite() || self.constant_factor <= 0.0 {
            return Err(ConfigError::new("the constant factor must be positive"));
        }
        Ok(())
    }
}

/// Grows random trees of an exact size top-down. Size 1 draws a leaf,
/// size 2 masks out the binary operators, larger sizes draw from every
/// operator and split the remaining budget uniformly between the operands
/// of a binary node.
#[derive(Clone, Debug)]
pub struct Sampler {
    leaves: Vec<Option<Var>>,
    constants: [bool; 2],
    leaf_dist: WeightedIndex<f64>,
    unary: Vec<Op>,
    unary_dist: Option<WeightedIndex<f64>>,
    any: Vec<Op>,
    any_dist: Option<WeightedIndex<f64>>,
}

impl Sampler {
    pub fn new<T: Tree>(weights: &NodeWeights, supply: Supply) -> Result<Sampler, ConfigError> {
        weights.validate()?;
        if supply.is_empty() {
            return Err(ConfigError::new("the proposition supply is empty"));
        }
        if let Some(op) = Op::ALL.iter().find(|&&op| weights.weight(op) > 0.0 && !T::supports(op)) {
            return Err(ConfigError::new(format!("operator {op:?} is not part of this logic; give it weight 0")));
        }
        let mut leaves: Vec<Option<Var>> = supply.vars().map(Some).collect();
        let mut leaf_w = vec![weights.prop; leaves.len()];
        leaves.extend([None, None]);
        leaf_w.extend([weights.prop / weights.constant_factor; 2]);
        let ops: Vec<Op> = Op::ALL.iter().copied().filter(|&op| weights.weight(op) > 0.0).collect();
        let unary: Vec<Op> = ops.iter().copied().filter(|op| op.arity() == 1).collect();
        let dist = |ops: &[Op]| WeightedIndex::new(ops.iter().map(|&op| weights.weight(op))).ok();
        Ok(Sampler {
            leaves,
            constants: [true, false],
            leaf_dist: WeightedIndex::new(leaf_w).expect("positive leaf weights"),
            unary_dist: dist(&unary),
            unary,
            any_dist: dist(&ops),
            any: ops,
        })
    }

    /// A tree of exactly `size` nodes, or `None` when the weights allow no
    /// such tree (for instance size 2 without unary operators).
    pub fn sample<T: Tree>(&self, rng: &mut impl Rng, size: usize) -> Option<T> {
        match size {
            0 => None,
            1 => {
                let n = self.leaves.len();
                let i = self.leaf_dist.sample(rng);
                Some(match self.leaves[i] {
                    Some(v) => T::var(v),
                    None => T::constant(self.constants[i + 2 - n]),
                })
            }
            2 => {
                let op = self.unary[self.unary_dist.as_ref()?.sample(rng)];
                Some(T::unary(op, self.sample(rng, 1)?))
            }
            _ => {
                let op = self.any[self.any_dist.as_ref()?.sample(rng)];
                if op.arity() == 1 {
                    Some(T::unary(op, self.sample(rng, size - 1)?))
                } else {
                    let left = rng.gen_range(1..=size - 2);
                    let a = self.sample(rng, left)?;
                    let b = self.sample(rng, size - 1 - left)?;
                    Some(T::binary(op, a, b))
                }
            }
        }
    }
}
