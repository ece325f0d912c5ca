use crate::terms::{VanillaTerm, Var};

/// Every vanilla term of size at most `max_size` whose variables and binders
/// are drawn from `vars`.
pub fn enumerate_vanilla(max_size: usize, vars: &[Var]) -> Vec<VanillaTerm> {
    let mut by_size: Vec<Vec<VanillaTerm>> = vec![Vec::new(); max_size + 1];
    for n in 1..=max_size {
        let mut out = Vec::new();
        if n == 1 {
            out.extend(vars.iter().map(|x| VanillaTerm::var(x.clone())));
        } else {
            for x in vars {
                for b in &by_size[n - 1] {
                    out.push(VanillaTerm::lam(x.clone(), b.clone()));
                }
            }
            for cs in 1..n - 1 {
                let bs = n - 1 - cs;
                for c in &by_size[cs] {
                    for b in &by_size[bs] {
                        for x in vars {
                            out.push(VanillaTerm::cut(c.clone(), x.clone(), b.clone()));
                            for y in vars {
                                out.push(VanillaTerm::subtr(
                                    y.clone(),
                                    c.clone(),
                                    x.clone(),
                                    b.clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        by_size[n] = out;
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Term;

    #[test]
    fn counts_for_two_variables() {
        let vars = [Var::from("x"), Var::from("y")];
        let all = enumerate_vanilla(4, &vars);
        let count = |n| all.iter().filter(|t| t.size() == n).count();
        assert_eq!((count(1), count(2), count(3), count(4)), (2, 4, 32, 160));
    }
}
