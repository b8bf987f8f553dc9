//! Dense tables over small sets of discrete variables.
//!
//! A factor's scope lists its axes from most significant to fastest
//! varying, so the flat value index of an assignment is the mixed-radix
//! encoding of the digits in scope order. Everything here is desk-scale:
//! operations iterate full configuration spaces.

use crate::graph::NodeId;

#[derive(Clone, Debug)]
pub(crate) struct Factor {
    scope: Vec<NodeId>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<NodeId>, cards: Vec<usize>, values: Vec<f64>) -> Factor {
        debug_assert_eq!(scope.len(), cards.len());
        debug_assert_eq!(values.len(), cards.iter().product::<usize>());
        debug_assert!(distinct(&scope), "factor scope has repeated variables");
        Factor {
            scope,
            cards,
            values,
        }
    }

    pub fn scalar(value: f64) -> Factor {
        Factor {
            scope: Vec::new(),
            cards: Vec::new(),
            values: vec![value],
        }
    }

    pub fn scope(&self) -> &[NodeId] {
        &self.scope
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn card_of(&self, v: NodeId) -> Option<usize> {
        self.scope
            .iter()
            .position(|&s| s == v)
            .map(|k| self.cards[k])
    }

    /// Strides of this factor's own axes, fastest axis last.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.scope.len()];
        for k in (0..self.scope.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.cards[k + 1];
        }
        s
    }

    /// For each variable of `outer`, this factor's stride (0 if absent).
    fn strides_in(&self, outer: &[NodeId]) -> Vec<usize> {
        let own = self.strides();
        outer
            .iter()
            .map(|v| self.scope.iter().position(|s| s == v).map_or(0, |k| own[k]))
            .collect()
    }

    /// Pointwise product over the sorted union of both scopes.
    pub fn product(&self, other: &Factor) -> Factor {
        let mut scope: Vec<NodeId> = self.scope.clone();
        for &v in &other.scope {
            if !scope.contains(&v) {
                scope.push(v);
            }
        }
        scope.sort_unstable();
        let cards: Vec<usize> = scope
            .iter()
            .map(|&v| {
                let c = self.card_of(v).or_else(|| other.card_of(v));
                let c = c.expect("union variable comes from an operand");
                if let (Some(a), Some(b)) = (self.card_of(v), other.card_of(v)) {
                    debug_assert_eq!(a, b, "cardinality mismatch for {}", v);
                }
                c
            })
            .collect();
        let sa = self.strides_in(&scope);
        let sb = other.strides_in(&scope);
        let total: usize = cards.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut digits = vec![0usize; scope.len()];
        let mut ia = 0usize;
        let mut ib = 0usize;
        for _ in 0..total {
            values.push(self.values[ia] * other.values[ib]);
            // Odometer increment, fastest axis last.
            for k in (0..scope.len()).rev() {
                digits[k] += 1;
                ia += sa[k];
                ib += sb[k];
                if digits[k] < cards[k] {
                    break;
                }
                ia -= sa[k] * cards[k];
                ib -= sb[k] * cards[k];
                digits[k] = 0;
            }
        }
        Factor::new(scope, cards, values)
    }

    /// Sums the given variable out of the factor.
    pub fn sum_out(&self, var: NodeId) -> Factor {
        let axis = self
            .scope
            .iter()
            .position(|&v| v == var)
            .expect("summed variable is in scope");
        let scope: Vec<NodeId> = self.scope.iter().copied().filter(|&v| v != var).collect();
        let cards: Vec<usize> = self
            .cards
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != axis)
            .map(|(_, &c)| c)
            .collect();
        let own = self.strides();
        let var_stride = own[axis];
        let var_card = self.cards[axis];
        let rest: Vec<usize> = (0..self.scope.len()).filter(|&k| k != axis).collect();
        let total: usize = cards.iter().product();
        let mut values = vec![0.0; total];
        let mut digits = vec![0usize; rest.len()];
        let mut base = 0usize;
        for out in values.iter_mut() {
            let mut acc = 0.0;
            for x in 0..var_card {
                acc += self.values[base + x * var_stride];
            }
            *out = acc;
            for (k, &rk) in rest.iter().enumerate().rev() {
                digits[k] += 1;
                base += own[rk];
                if digits[k] < self.cards[rk] {
                    break;
                }
                base -= own[rk] * self.cards[rk];
                digits[k] = 0;
            }
        }
        Factor::new(scope, cards, values)
    }

    /// Fixes one variable to a value, dropping its axis.
    pub fn slice(&self, var: NodeId, value: usize) -> Factor {
        let axis = self
            .scope
            .iter()
            .position(|&v| v == var)
            .expect("sliced variable is in scope");
        debug_assert!(value < self.cards[axis]);
        let scope: Vec<NodeId> = self.scope.iter().copied().filter(|&v| v != var).collect();
        let cards: Vec<usize> = self
            .cards
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != axis)
            .map(|(_, &c)| c)
            .collect();
        let own = self.strides();
        let rest: Vec<usize> = (0..self.scope.len()).filter(|&k| k != axis).collect();
        let total: usize = cards.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut digits = vec![0usize; rest.len()];
        let mut base = value * own[axis];
        for _ in 0..total {
            values.push(self.values[base]);
            for (k, &rk) in rest.iter().enumerate().rev() {
                digits[k] += 1;
                base += own[rk];
                if digits[k] < self.cards[rk] {
                    break;
                }
                base -= own[rk] * self.cards[rk];
                digits[k] = 0;
            }
        }
        Factor::new(scope, cards, values)
    }

    /// Pointwise division by a factor whose scope is a subset of this one.
    ///
    /// Wherever the denominator is zero the result is `1 / card(uniform_var)`
    /// instead, which keeps the quotient normalized over `uniform_var` at
    /// configurations of probability zero.
    pub fn divide_with_uniform(&self, denom: &Factor, uniform_var: NodeId) -> Factor {
        debug_assert!(denom.scope.iter().all(|v| self.scope.contains(v)));
        let card_u = self
            .card_of(uniform_var)
            .expect("uniform variable is in scope");
        let sd = denom.strides_in(&self.scope);
        let cards = self.cards.clone();
        let total = self.len();
        let mut values = Vec::with_capacity(total);
        let mut digits = vec![0usize; self.scope.len()];
        let mut id = 0usize;
        for k in 0..total {
            let d = denom.values[id];
            values.push(if d == 0.0 {
                1.0 / card_u as f64
            } else {
                self.values[k] / d
            });
            for a in (0..self.scope.len()).rev() {
                digits[a] += 1;
                id += sd[a];
                if digits[a] < cards[a] {
                    break;
                }
                id -= sd[a] * cards[a];
                digits[a] = 0;
            }
        }
        Factor::new(self.scope.clone(), cards, values)
    }

    /// Same values under a permuted scope.
    pub fn reorder(&self, new_scope: &[NodeId]) -> Factor {
        debug_assert_eq!(new_scope.len(), self.scope.len());
        debug_assert!(new_scope.iter().all(|v| self.scope.contains(v)));
        if new_scope == self.scope {
            return self.clone();
        }
        let cards: Vec<usize> = new_scope
            .iter()
            .map(|&v| self.card_of(v).expect("same variable set"))
            .collect();
        let so = self.strides_in(new_scope);
        let total = self.len();
        let mut values = Vec::with_capacity(total);
        let mut digits = vec![0usize; new_scope.len()];
        let mut io = 0usize;
        for _ in 0..total {
            values.push(self.values[io]);
            for k in (0..new_scope.len()).rev() {
                digits[k] += 1;
                io += so[k];
                if digits[k] < cards[k] {
                    break;
                }
                io -= so[k] * cards[k];
                digits[k] = 0;
            }
        }
        Factor::new(new_scope.to_vec(), cards, values)
    }

    /// Largest absolute difference against another factor over the same
    /// variable set (axes may be permuted).
    pub fn max_abs_diff(&self, other: &Factor) -> f64 {
        let aligned = other.reorder(&self.scope);
        self.values
            .iter()
            .zip(aligned.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn distinct(scope: &[NodeId]) -> bool {
    let mut seen = scope.to_vec();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}
