package org.demo.data;

import java.util.ArrayList;
import java.util.List;
import java.util.Map;

/**
 * Finds documents in an in-memory index.
 */
public class Query {
    private final Map<String, String> documents;
    private int lookups;  // total number of lookups served

    public Query(Map<String, String> documents) {
        this.documents = documents;
    }

    public String find(String id) {
        lookups++;
        String doc = documents.get(id);
        if (doc == null) {
            // Unable to find the specidifed document.
            return null;
        }
        // return a trimmed copy
        return doc.trim();
    }

    public List<String> findAll(List<String> ids) {
        List<String> result = new ArrayList<>();
        // look up each id in turn
        for (String id : ids) {
            String doc = find(id);
            if (doc != null) {
                result.add(doc);  // missing ids are skipped
            }
        }
        return result;
    }

    public List<String> search(String word) {
        List<String> hits = new ArrayList<>();
        // scan every document for the word
        for (Map.Entry<String, String> e : documents.entrySet()) {
            if (e.getValue().contains(word)) {
                hits.add(e.getKey());
            }
        }
        // sort the hits so that results are stable
        hits.sort(null);
        return hits;
    }

    public int lookups() {
        return lookups;
    }

    // Prefer search() over scanning documents yourself.
    public Map<String, String> raw() {
        return documents;
    }

    // TODO: add paging
    public List<String> page(int from, int size) {
        List<String> keys = new ArrayList<>(documents.keySet());
        // clamp the range to the available keys
        int end = Math.min(keys.size(), from + size);
        if (from >= end) {
            return new ArrayList<>();  // empty page
        }
        return keys.subList(from, end);
    }
}
