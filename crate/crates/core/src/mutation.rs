//! Debug mutations used to check that the invariant search actually has teeth.
//!
//! A mutation is scoped to the current thread; [`with_mutation`] installs one
//! for the duration of a closure. Nothing outside the search harness and the
//! mutation tests should enable these.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// `is_ideal` stops requiring the bottom element.
    DropIdealBottom,
    /// Tilde families are enumerated without the lax inequality.
    SkipLaxInequality,
    /// `C` on morphisms takes the raw direct image instead of its down-closure.
    RawImage,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::DropIdealBottom,
        Mutation::SkipLaxInequality,
        Mutation::RawImage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::DropIdealBottom => "drop-ideal-bottom",
            Mutation::SkipLaxInequality => "skip-lax-inequality",
            Mutation::RawImage => "raw-image",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mutation `{s}`"))
    }
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

/// Runs `f` with `mutation` active on this thread, restoring the previous state.
pub fn with_mutation<R>(mutation: Option<Mutation>, f: impl FnOnce() -> R) -> R {
    struct Restore(Option<Mutation>);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _restore = Restore(ACTIVE.with(|a| a.replace(mutation)));
    f()
}

pub(crate) fn is_active(mutation: Mutation) -> bool {
    ACTIVE.with(|a| a.get() == Some(mutation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoped_and_restored() {
        assert!(!is_active(Mutation::RawImage));
        with_mutation(Some(Mutation::RawImage), || {
            assert!(is_active(Mutation::RawImage));
            with_mutation(None, || assert!(!is_active(Mutation::RawImage)));
            assert!(is_active(Mutation::RawImage));
        });
        assert!(!is_active(Mutation::RawImage));
    }

    #[test]
    fn names_parse() {
        for m in Mutation::ALL {
            assert_eq!(m.name().parse::<Mutation>().unwrap(), m);
        }
        assert!("nope".parse::<Mutation>().is_err());
    }
}
