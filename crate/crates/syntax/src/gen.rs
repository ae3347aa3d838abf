use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, Group};
use crate::parse::Signature;

/// Random formula generator over a signature.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    /// Upper bound on the (finite) modal depth of generated formulas.
    pub max_depth: u32,
    pub max_size: usize,
    pub allow_c: bool,
    /// Emit `true`, `false`, `|`, `->` and `O` as well as the core connectives.
    pub sugar: bool,
}

impl FormulaGen {
    pub fn new(sig: &Signature, max_depth: u32, max_size: usize) -> Self {
        FormulaGen {
            atoms: sig.atoms.clone(),
            agents: sig.agents.clone(),
            max_depth,
            max_size: max_size.max(1),
            allow_c: false,
            sugar: true,
        }
    }

    pub fn with_c(mut self, allow: bool) -> Self {
        self.allow_c = allow;
        self
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let size = rng.gen_range(1..=self.max_size);
        self.gen(rng, self.max_depth, size)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        if self.atoms.is_empty() || (self.sugar && rng.gen_ratio(1, 6)) {
            if self.atoms.is_empty() && !self.sugar {
                return Formula::True;
            }
            return if rng.gen_bool(0.5) { Formula::True } else { Formula::False };
        }
        Formula::Atom(self.atoms.choose(rng).unwrap().clone())
    }

    fn group<R: Rng + ?Sized>(&self, rng: &mut R) -> Group {
        loop {
            let picked: Vec<&String> = self.agents.iter().filter(|_| rng.gen_bool(0.5)).collect();
            if let Some(g) = Group::new(picked.into_iter().cloned()) {
                return g;
            }
        }
    }

    fn gen<R: Rng + ?Sized>(&self, rng: &mut R, depth: u32, size: usize) -> Formula {
        if size <= 1 {
            return self.leaf(rng);
        }
        let modal = depth > 0 && !self.agents.is_empty();
        let mut choices: Vec<u8> = vec![0, 1];
        if self.sugar {
            choices.extend([2, 3]);
        }
        if modal {
            choices.extend([4, 4, 5, 5, 7]);
            if self.sugar {
                choices.push(6);
            }
        }
        if self.allow_c && !self.agents.is_empty() {
            choices.push(8);
        }
        let agent = |rng: &mut R| self.agents.choose(rng).unwrap().clone();
        match *choices.choose(rng).unwrap() {
            0 => Formula::not(self.gen(rng, depth, size - 1)),
            c @ 1..=3 => {
                let left = rng.gen_range(1..size.max(2));
                let right = (size - 1).saturating_sub(left).max(1);
                let a = self.gen(rng, depth, left);
                let b = self.gen(rng, depth, right);
                match c {
                    1 => Formula::and(a, b),
                    2 => Formula::or(a, b),
                    _ => Formula::implies(a, b),
                }
            }
            4 => Formula::K(agent(rng), Box::new(self.gen(rng, depth - 1, size - 1))),
            5 => Formula::M(agent(rng), Box::new(self.gen(rng, depth - 1, size - 1))),
            6 => Formula::O(agent(rng), Box::new(self.gen(rng, depth - 1, size - 1))),
            7 => Formula::E(self.group(rng), Box::new(self.gen(rng, depth - 1, size - 1))),
            _ => Formula::C(self.group(rng), Box::new(self.gen(rng, depth, size - 1))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn respects_depth() {
        let sig = Signature::new(["p", "q"], ["a", "b"]);
        let g = FormulaGen::new(&sig, 2, 12);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let f = g.generate(&mut rng);
            assert!(f.is_c_free());
            assert!(f.finite_depth().unwrap() <= 2);
        }
    }

    #[test]
    fn empty_vocabulary() {
        let sig = Signature::new(Vec::<String>::new(), ["a"]);
        let g = FormulaGen::new(&sig, 1, 6);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(g.generate(&mut rng).atoms().is_empty());
        }
    }
}
