package org.demo.util;

/**
 * Static helpers for strings.
 *
 * @since 1.2
 */
public final class StringUtil {
    private StringUtil() {
        // no instances
    }

    /** Returns true when the string is null or has no characters. */
    public static boolean isEmpty(String s) {
        return s == null || s.isEmpty();
    }

    public static String repeat(String s, int n) {
        if (n <= 0) {
            return "";  // nothing to repeat
        }
        StringBuilder sb = new StringBuilder(s.length() * n);
        // append the string n times
        for (int i = 0; i < n; i++) {
            sb.append(s);
        }
        return sb.toString();
    }

    public static String capitalize(String s) {
        if (isEmpty(s)) {
            return s;
        }
        // upper-case the first character only
        return Character.toUpperCase(s.charAt(0)) + s.substring(1);
    }

    public static int count(String s, char c) {
        int n = 0;  // occurrences seen so far
        // count matching characters
        for (int i = 0; i < s.length(); i++) {
            if (s.charAt(i) == c) {
                n++;
            }
        }
        return n;
    }

    public static String trimTo(String s, int max) {
        // strings shorter than the limit are returned unchanged
        if (s.length() <= max) {
            return s;
        }
        // cut and add an ellipsis
        return s.substring(0, max - 3) + "...";
    }

    // XXX: does not handle surrogate pairs
    public static String reverse(String s) {
        // build the reversed string
        return new StringBuilder(s).reverse().toString();
    }

    public static String join(String sep, String... parts) {
        StringBuilder sb = new StringBuilder();
        for (int i = 0; i < parts.length; i++) {
            if (i > 0) {
                sb.append(sep);  // no separator before the first part
            }
            sb.append(parts[i]);
        }
        return sb.toString();
    }

    // return s.trim();
    public static String strip(String s) {
        // remove leading and trailing whitespace
        int start = 0;
        int end = s.length();
        while (start < end && Character.isWhitespace(s.charAt(start))) {
            start++;
        }
        while (end > start && Character.isWhitespace(s.charAt(end - 1))) {
            end--;
        }
        return s.substring(start, end);
    }
}
