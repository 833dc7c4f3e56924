package org.demo.app;

import java.util.Properties;

/**
 * Settings read from a properties file.
 *
 * @author Jane Roe, 2016
 */
public class Config {
    private static final String DEFAULT_HOST = "localhost";  // used when host is unset
    private static final int DEFAULT_PORT = 8080;  // the standard HTTP alternate port
    private static final int UNLIMITED = -1;  // -1 means unlimited

    private final Properties props;

    public Config(Properties props) {
        this.props = props;
    }

    public String host() {
        // fall back to the default host
        return props.getProperty("host", DEFAULT_HOST);
    }

    public int port() {
        String value = props.getProperty("port");
        if (value == null) {
            return DEFAULT_PORT;
        }
        try {
            // parse the port number
            return Integer.parseInt(value.trim());
        } catch (NumberFormatException e) {
            // a malformed port is treated as unset
            return DEFAULT_PORT;
        }
    }

    public int maxConnections() {
        String value = props.getProperty("max.connections");
        // absent means no limit
        if (value == null) {
            return UNLIMITED;
        }
        return Integer.parseInt(value);
    }

    // The returned object is a copy; modifying it has no effect.
    public Properties asProperties() {
        Properties copy = new Properties();
        // copy every entry
        copy.putAll(props);
        return copy;
    }

    // $NON-NLS-1$
    public static final String KEY_HOST = "host";

    // @formatter:off
    public static final String[] KEYS = {
        "host", "port", "max.connections"
    };
    // @formatter:on

    public boolean debug() {
        return Boolean.parseBoolean(props.getProperty("debug"));  // "true" enables debug
    }
}
