//! The ten-transaction running example (items a-e) in quantity-profit form.

use crate::io::parse_quantity_profit;
use crate::model::TransactionDatabase;

pub const EX_TRANSACTIONS: &str = "\
# running example
a:3 b:4 c:2 d:6 e:2
a:7 b:4 c:1 e:2
a:5 b:2 e:1
b:4 c:1 d:2
a:2 d:4
a:2 b:2 c:6 d:4 e:3
a:1 b:2
d:3
b:3 c:5 d:2 e:5
b:3 e:5
";

pub const EX_PROFITS: &str = "\
a 3
b 5
c 1
d 2
e 10
";

/// Same database in SPMF utility format (item labels a=1 .. e=5).
pub const EX_SPMF: &str = "\
1 2 3 4 5:63:9 20 2 12 20
1 2 3 5:62:21 20 1 20
1 2 5:35:15 10 10
2 3 4:25:20 1 4
1 4:14:6 8
1 2 3 4 5:60:6 10 6 8 30
1 2:13:3 10
4:6:6
2 3 4 5:74:15 5 4 50
2 5:65:15 50
";

pub fn ex_db() -> TransactionDatabase {
    parse_quantity_profit(EX_TRANSACTIONS.as_bytes(), EX_PROFITS.as_bytes())
        .expect("running example parses")
}
