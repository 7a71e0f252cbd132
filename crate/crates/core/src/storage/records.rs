use std::collections::{BTreeMap, HashMap, HashSet};

use super::StorageError;
use crate::value::{Value, ValueMap};

/// Rows or documents, keyed by insertion sequence number.
#[derive(Clone, Debug)]
pub(super) struct RecordStore {
    items: BTreeMap<u64, Value>,
    next: u64,
    primary: Option<String>,
    index: HashMap<Value, u64>,
}

impl RecordStore {
    pub fn new(primary: Option<&str>) -> Self {
        RecordStore {
            items: BTreeMap::new(),
            next: 0,
            primary: primary.map(str::to_string),
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Value)> {
        self.items.iter().map(|(k, v)| (*k, v))
    }

    pub fn get(&self, id: u64) -> Option<&Value> {
        self.items.get(&id)
    }

    fn key_of(&self, v: &Value) -> Option<Value> {
        let p = self.primary.as_ref()?;
        Some(v.as_map()?.get(p).cloned().unwrap_or(Value::Null))
    }

    pub fn insert_batch(&mut self, object: &str, items: Vec<Value>) -> Result<(), StorageError> {
        let mut seen = HashSet::new();
        for it in &items {
            if let Some(k) = self.key_of(it) {
                if self.index.contains_key(&k) || !seen.insert(k.clone()) {
                    return Err(StorageError::DuplicatePrimaryKey {
                        object: object.to_string(),
                        key: k,
                    });
                }
            }
        }
        for it in items {
            if let Some(k) = self.key_of(&it) {
                self.index.insert(k, self.next);
            }
            self.items.insert(self.next, it);
            self.next += 1;
        }
        Ok(())
    }

    pub fn remove(&mut self, id: u64) {
        if let Some(v) = self.items.remove(&id) {
            if let Some(k) = self.key_of(&v) {
                self.index.remove(&k);
            }
        }
    }

    pub fn update_batch(&mut self, object: &str, updates: Vec<(u64, Value)>) -> Result<usize, StorageError> {
        if self.primary.is_some() {
            let mut index = self.index.clone();
            for (id, _) in &updates {
                if let Some(k) = self.key_of(&self.items[id]) {
                    index.remove(&k);
                }
            }
            for (id, v) in &updates {
                let k = self.key_of(v).unwrap();
                if index.insert(k.clone(), *id).is_some() {
                    return Err(StorageError::DuplicatePrimaryKey {
                        object: object.to_string(),
                        key: k,
                    });
                }
            }
            self.index = index;
        }
        let n = updates.len();
        for (id, v) in updates {
            self.items.insert(id, v);
        }
        Ok(n)
    }
}

/// Key-value pairs in key order. Items are exposed as two-entry maps.
#[derive(Clone, Debug)]
pub(super) struct KvStore {
    key_name: String,
    value_name: String,
    pairs: BTreeMap<Value, Value>,
}

impl KvStore {
    pub fn new(key_name: &str, value_name: &str) -> Self {
        KvStore {
            key_name: key_name.to_string(),
            value_name: value_name.to_string(),
            pairs: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    fn item(&self, k: &Value, v: &Value) -> Value {
        let mut m = ValueMap::new();
        m.insert(self.key_name.clone(), k.clone());
        m.insert(self.value_name.clone(), v.clone());
        Value::Map(m)
    }

    fn split(&self, item: &Value) -> (Value, Value) {
        let m = item.as_map().expect("conforming KV item is a map");
        (
            m.get(&self.key_name).cloned().unwrap_or(Value::Null),
            m.get(&self.value_name).cloned().unwrap_or(Value::Null),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Value, Value)> {
        self.pairs.iter().map(|(k, v)| (k, self.item(k, v)))
    }

    pub fn get_item(&self, key: &Value) -> Option<Value> {
        self.pairs.get(key).map(|v| self.item(key, v))
    }

    pub fn insert_batch(&mut self, object: &str, items: Vec<Value>) -> Result<(), StorageError> {
        let split: Vec<(Value, Value)> = items.iter().map(|i| self.split(i)).collect();
        let mut seen = HashSet::new();
        for (k, _) in &split {
            if self.pairs.contains_key(k) || !seen.insert(k.clone()) {
                return Err(StorageError::DuplicatePrimaryKey {
                    object: object.to_string(),
                    key: k.clone(),
                });
            }
        }
        self.pairs.extend(split);
        Ok(())
    }

    pub fn remove(&mut self, key: &Value) {
        self.pairs.remove(key);
    }

    pub fn update_batch(
        &mut self,
        object: &str,
        updates: Vec<(Value, Value)>,
    ) -> Result<usize, StorageError> {
        let mut pairs = self.pairs.clone();
        for (old, _) in &updates {
            pairs.remove(old);
        }
        for (_, item) in &updates {
            let (k, v) = self.split(item);
            if pairs.insert(k.clone(), v).is_some() {
                return Err(StorageError::DuplicatePrimaryKey {
                    object: object.to_string(),
                    key: k,
                });
            }
        }
        self.pairs = pairs;
        Ok(updates.len())
    }
}
