package org.example.text;

import java.util.Locale;
import java.util.StringJoiner;
import java.util.regex.Pattern;

public final class TextUtils {
  private static final Pattern WORD = Pattern.compile("[A-Za-z]+");
  private static final char SEPARATOR = ',';

  private TextUtils() {}

  public static boolean isBlank(String s) {
    return s == null || s.trim().isEmpty();
  }

  public static String capitalize(String s) {
    if (isBlank(s)) {
      return s;
    }
    return Character.toUpperCase(s.charAt(0)) + s.substring(1);
  }

  public static String reverse(String s) {
    return new StringBuilder(s).reverse().toString();
  }

  public static int countWords(String text) {
    int n = 0;
    var m = WORD.matcher(text);
    while (m.find()) {
      n++;
    }
    return n;
  }

  public static String join(String[] parts) {
    StringJoiner joiner = new StringJoiner(String.valueOf(SEPARATOR));
    for (String p : parts) joiner.add(p);
    return joiner.toString();
  }

  public static String repeat(String s, int times) {
    StringBuilder sb = new StringBuilder();
    for (int i = 0; i < times; i++) {
      sb.append(s);
    }
    return sb.toString();
  }

  public static String lower(String s) {
    return s.toLowerCase(Locale.ROOT);
  }

  public static boolean isPalindrome(String s) {
    int i = 0, j = s.length() - 1;
    while (i < j) {
      if (s.charAt(i++) != s.charAt(j--)) {
        return false;
      }
    }
    return true;
  }

  public static String padLeft(String s, int width, char fill) {
    if (s.length() >= width) return s;
    char[] buf = new char[width - s.length()];
    java.util.Arrays.fill(buf, fill);
    return new String(buf) + s;
  }

  public static String escapeQuotes(String s) {
    return s.replace("\"", "\\\"").replace('\'', '`');
  }

  public static long checksum(String s) {
    long h = 0x811c9dc5L;
    for (int i = 0; i < s.length(); i++) {
      h ^= s.charAt(i);
      h *= 0x01000193L;
    }
    return h & 0xffffffffL;
  }

  public static String banner(String title) {
    String text = """
        ==========
        %s
        ==========
        """;
    return text.formatted(title);
  }

  public static int indexOfIgnoreCase(String haystack, String needle) {
    return lower(haystack).indexOf(lower(needle));
  }

  public static String truncate(String s, int max) {
    return s.length() <= max ? s : s.substring(0, max - 3) + "...";
  }

  public static String[] splitCsv(String line) {
    return line.split(String.valueOf(SEPARATOR), -1);
  }

  public static double ratio(int a, int b) {
    return b == 0 ? 0.0 : a / (double) b * 1.5e0;
  }
}
