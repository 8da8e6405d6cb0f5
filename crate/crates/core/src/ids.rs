//! Dense integer identities for market participants.
//!
//! Identifiers are assigned in declaration order when a scenario is loaded;
//! ordering comparisons (e.g. the argmax tie-break) follow that order.

use std::fmt;

macro_rules! id_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_newtype!(
    /// A buyer agent.
    BuyerId
);
id_newtype!(
    /// A seller agent.
    SellerId
);
id_newtype!(
    /// A good traded in the market.
    GoodId
);
