//! Weight semigroups.
//!
//! A semigroup only promises an associative `plus`. There is no zero, so every
//! aggregate over a possibly empty set is an `Option<W>` with `None` standing
//! for "nothing matched".

use std::fmt;

/// Associative addition over weights.
pub trait Semigroup: Clone + fmt::Debug {
    fn plus(&self, rhs: &Self) -> Self;
}

/// Folds two optional partial sums, keeping operand order.
pub fn plus_opt<W: Semigroup>(acc: Option<W>, next: Option<W>) -> Option<W> {
    match (acc, next) {
        (Some(a), Some(b)) => Some(a.plus(&b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Left-to-right fold of an iterator of weights.
pub fn fold<'a, W: Semigroup + 'a>(items: impl IntoIterator<Item = &'a W>) -> Option<W> {
    let mut it = items.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, w| acc.plus(w)))
}

macro_rules! int_semigroup {
    ($(#[$m:meta])* $name:ident, |$a:ident, $b:ident| $body:expr) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub i64);

        impl Semigroup for $name {
            fn plus(&self, rhs: &Self) -> Self {
                let ($a, $b) = (self.0, rhs.0);
                $name($body)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<i64> for $name {
            fn from(v: i64) -> Self {
                $name(v)
            }
        }
    };
}

int_semigroup!(
    /// Integers under addition, ordered naturally.
    Add,
    |a, b| a + b
);
int_semigroup!(
    /// Integers under `min`.
    Min,
    |a, b| a.min(b)
);
int_semigroup!(
    /// Integers under `max`.
    Max,
    |a, b| a.max(b)
);

/// Strings under concatenation. Not commutative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Concat(pub String);

impl Semigroup for Concat {
    fn plus(&self, rhs: &Self) -> Self {
        let mut s = String::with_capacity(self.0.len() + rhs.0.len());
        s.push_str(&self.0);
        s.push_str(&rhs.0);
        Concat(s)
    }
}

impl fmt::Display for Concat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn add_is_associative(x in -1_000_000i64..1_000_000, y in -1_000_000i64..1_000_000, z in -1_000_000i64..1_000_000) {
            let (x, y, z) = (Add(x), Add(y), Add(z));
            prop_assert_eq!(x.plus(&y.plus(&z)), x.plus(&y).plus(&z));
        }

        #[test]
        fn min_max_are_associative(x: i64, y: i64, z: i64) {
            prop_assert_eq!(Min(x).plus(&Min(y).plus(&Min(z))), Min(x).plus(&Min(y)).plus(&Min(z)));
            prop_assert_eq!(Max(x).plus(&Max(y).plus(&Max(z))), Max(x).plus(&Max(y)).plus(&Max(z)));
        }

        #[test]
        fn concat_is_associative(x in "[a-c]{0,4}", y in "[a-c]{0,4}", z in "[a-c]{0,4}") {
            let (x, y, z) = (Concat(x), Concat(y), Concat(z));
            prop_assert_eq!(x.plus(&y.plus(&z)), x.plus(&y).plus(&z));
        }
    }

    #[test]
    fn concat_keeps_order() {
        assert_eq!(Concat("ab".into()).plus(&Concat("c".into())), Concat("abc".into()));
    }

    #[test]
    fn optional_fold() {
        assert_eq!(plus_opt::<Add>(None, None), None);
        assert_eq!(plus_opt(Some(Add(2)), None), Some(Add(2)));
        assert_eq!(plus_opt(None, Some(Add(3))), Some(Add(3)));
        assert_eq!(fold(&[Min(4), Min(-1), Min(7)]), Some(Min(-1)));
        assert_eq!(fold::<Add>(&[]), None);
    }
}
