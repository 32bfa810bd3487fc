//! A minimal JSON-schema checker covering the subset the shipped schema
//! uses: type, required, properties, items, prefixItems, enum, oneOf,
//! $ref into $defs, minItems, maxItems.

use serde_json::Value;

pub fn validate(schema_doc: &Value, def: &str, value: &Value) -> Result<(), String> {
    let defs = schema_doc
        .get("$defs")
        .ok_or_else(|| "schema has no $defs".to_string())?;
    let root = defs
        .get(def)
        .ok_or_else(|| format!("no definition named {def}"))?;
    check(schema_doc, root, value, def)
}

fn resolve<'a>(schema_doc: &'a Value, reference: &str) -> Result<&'a Value, String> {
    let path = reference
        .strip_prefix("#/")
        .ok_or_else(|| format!("unsupported $ref {reference}"))?;
    let mut cur = schema_doc;
    for part in path.split('/') {
        cur = cur
            .get(part)
            .ok_or_else(|| format!("dangling $ref {reference}"))?;
    }
    Ok(cur)
}

fn check(doc: &Value, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        return check(doc, resolve(doc, r)?, value, path);
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let hits = options
            .iter()
            .filter(|opt| check(doc, opt, value, path).is_ok())
            .count();
        return if hits == 1 {
            Ok(())
        } else {
            Err(format!("{path}: {hits} of the oneOf branches matched"))
        };
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{path}: {value} not in enum"));
        }
        return Ok(());
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => return Err(format!("{path}: unsupported type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {ty}, got {value}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required {
                let key = key.as_str().unwrap();
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required key {key}"));
                }
            }
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    check(doc, sub, v, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                return Err(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
            if (arr.len() as u64) > max {
                return Err(format!("{path}: more than {max} items"));
            }
        }
        if let Some(prefix) = schema.get("prefixItems").and_then(Value::as_array) {
            for (k, sub) in prefix.iter().enumerate() {
                if let Some(v) = arr.get(k) {
                    check(doc, sub, v, &format!("{path}[{k}]"))?;
                }
            }
        } else if let Some(items) = schema.get("items") {
            for (k, v) in arr.iter().enumerate() {
                check(doc, items, v, &format!("{path}[{k}]"))?;
            }
        }
    }
    Ok(())
}
