"""Breakpoint tables (seconds, km/h) of the nominal speed profiles."""

NEDC = (
    (0, 0), (6, 0), (11, 0), (15, 15), (23, 15), (25, 10), (28, 0), (44, 0), (49, 0), (54,
    15), (56, 15), (61, 32), (85, 32), (93, 10), (96, 0), (112, 0), (117, 0), (122, 15),
    (124, 15), (133, 35), (135, 35), (143, 50), (155, 50), (163, 35), (176, 35), (178, 35),
    (185, 10), (188, 0), (195, 0), (201, 0), (206, 0), (210, 15), (218, 15), (220, 10),
    (223, 0), (239, 0), (244, 0), (249, 15), (251, 15), (256, 32), (280, 32), (288, 10),
    (291, 0), (307, 0), (312, 0), (317, 15), (319, 15), (328, 35), (330, 35), (338, 50),
    (350, 50), (358, 35), (371, 35), (373, 35), (380, 10), (383, 0), (390, 0), (396, 0),
    (401, 0), (405, 15), (413, 15), (415, 10), (418, 0), (434, 0), (439, 0), (444, 15),
    (446, 15), (451, 32), (475, 32), (483, 10), (486, 0), (502, 0), (507, 0), (512, 15),
    (514, 15), (523, 35), (525, 35), (533, 50), (545, 50), (553, 35), (566, 35), (568, 35),
    (575, 10), (578, 0), (585, 0), (591, 0), (596, 0), (600, 15), (608, 15), (610, 10),
    (613, 0), (629, 0), (634, 0), (639, 15), (641, 15), (646, 32), (670, 32), (678, 10),
    (681, 0), (697, 0), (702, 0), (707, 15), (709, 15), (718, 35), (720, 35), (728, 50),
    (740, 50), (748, 35), (761, 35), (763, 35), (770, 10), (773, 0), (780, 0), (800, 0),
    (805, 15), (807, 15), (816, 35), (818, 35), (826, 50), (828, 50), (841, 70), (891, 70),
    (895, 60), (899, 50), (968, 50), (981, 70), (1031, 70), (1066, 100), (1096, 100), (1116,
    120), (1126, 120), (1142, 80), (1150, 50), (1160, 0), (1180, 0),
)

PERM_NEDC = (
    (0, 0), (6, 0), (11, 0), (16, 15), (18, 15), (23, 32), (47, 32), (55, 10), (58, 0), (74,
    0), (79, 0), (84, 15), (86, 15), (95, 35), (97, 35), (105, 50), (117, 50), (125, 35),
    (138, 35), (140, 35), (147, 10), (150, 0), (166, 0), (171, 0), (175, 15), (183, 15),
    (185, 10), (188, 0), (195, 0), (201, 0), (206, 0), (211, 15), (213, 15), (222, 35),
    (224, 35), (232, 50), (244, 50), (252, 35), (265, 35), (267, 35), (274, 10), (277, 0),
    (293, 0), (298, 0), (302, 15), (310, 15), (312, 10), (315, 0), (331, 0), (336, 0), (341,
    15), (343, 15), (348, 32), (372, 32), (380, 10), (383, 0), (390, 0), (396, 0), (401, 0),
    (406, 15), (408, 15), (417, 35), (419, 35), (427, 50), (439, 50), (447, 35), (460, 35),
    (462, 35), (469, 10), (472, 0), (488, 0), (493, 0), (498, 15), (500, 15), (505, 32),
    (529, 32), (537, 10), (540, 0), (556, 0), (561, 0), (565, 15), (573, 15), (575, 10),
    (578, 0), (585, 0), (591, 0), (596, 0), (601, 15), (603, 15), (608, 32), (632, 32),
    (640, 10), (643, 0), (659, 0), (664, 0), (668, 15), (676, 15), (678, 10), (681, 0),
    (697, 0), (702, 0), (707, 15), (709, 15), (718, 35), (720, 35), (728, 50), (740, 50),
    (748, 35), (761, 35), (763, 35), (770, 10), (773, 0), (780, 0), (800, 0), (805, 15),
    (807, 15), (816, 35), (818, 35), (826, 50), (828, 50), (841, 70), (891, 70), (895, 60),
    (899, 50), (968, 50), (981, 70), (1031, 70), (1066, 100), (1096, 100), (1116, 120),
    (1126, 120), (1142, 80), (1150, 50), (1160, 0), (1180, 0),
)

DOUBLE_NEDC = (
    (0, 0), (6, 0), (11, 0), (15, 15), (23, 15), (25, 10), (28, 0), (44, 0), (49, 0), (54,
    15), (56, 15), (61, 32), (85, 32), (93, 10), (96, 0), (112, 0), (117, 0), (122, 15),
    (124, 15), (133, 35), (135, 35), (143, 50), (155, 50), (163, 35), (176, 35), (178, 35),
    (185, 10), (188, 0), (195, 0), (201, 0), (206, 0), (210, 15), (218, 15), (220, 10),
    (223, 0), (239, 0), (244, 0), (249, 15), (251, 15), (256, 32), (280, 32), (288, 10),
    (291, 0), (307, 0), (312, 0), (317, 15), (319, 15), (328, 35), (330, 35), (338, 50),
    (350, 50), (358, 35), (371, 35), (373, 35), (380, 10), (383, 0), (390, 0), (396, 0),
    (401, 0), (405, 15), (413, 15), (415, 10), (418, 0), (434, 0), (439, 0), (444, 15),
    (446, 15), (451, 32), (475, 32), (483, 10), (486, 0), (502, 0), (507, 0), (512, 15),
    (514, 15), (523, 35), (525, 35), (533, 50), (545, 50), (553, 35), (566, 35), (568, 35),
    (575, 10), (578, 0), (585, 0), (591, 0), (596, 0), (600, 15), (608, 15), (610, 10),
    (613, 0), (629, 0), (634, 0), (639, 15), (641, 15), (646, 32), (670, 32), (678, 10),
    (681, 0), (697, 0), (702, 0), (707, 15), (709, 15), (718, 35), (720, 35), (728, 50),
    (740, 50), (748, 35), (761, 35), (763, 35), (770, 10), (773, 0), (780, 0), (800, 0),
    (805, 15), (807, 15), (816, 35), (818, 35), (826, 50), (828, 50), (841, 70), (891, 70),
    (895, 60), (899, 50), (968, 50), (981, 70), (1031, 70), (1066, 100), (1096, 100), (1116,
    120), (1126, 120), (1142, 80), (1150, 50), (1160, 0), (1180, 0), (1186, 0), (1191, 0),
    (1195, 15), (1203, 15), (1205, 10), (1208, 0), (1224, 0), (1229, 0), (1234, 15), (1236,
    15), (1241, 32), (1265, 32), (1273, 10), (1276, 0), (1292, 0), (1297, 0), (1302, 15),
    (1304, 15), (1313, 35), (1315, 35), (1323, 50), (1335, 50), (1343, 35), (1356, 35),
    (1358, 35), (1365, 10), (1368, 0), (1375, 0), (1381, 0), (1386, 0), (1390, 15), (1398,
    15), (1400, 10), (1403, 0), (1419, 0), (1424, 0), (1429, 15), (1431, 15), (1436, 32),
    (1460, 32), (1468, 10), (1471, 0), (1487, 0), (1492, 0), (1497, 15), (1499, 15), (1508,
    35), (1510, 35), (1518, 50), (1530, 50), (1538, 35), (1551, 35), (1553, 35), (1560, 10),
    (1563, 0), (1570, 0), (1576, 0), (1581, 0), (1585, 15), (1593, 15), (1595, 10), (1598,
    0), (1614, 0), (1619, 0), (1624, 15), (1626, 15), (1631, 32), (1655, 32), (1663, 10),
    (1666, 0), (1682, 0), (1687, 0), (1692, 15), (1694, 15), (1703, 35), (1705, 35), (1713,
    50), (1725, 50), (1733, 35), (1746, 35), (1748, 35), (1755, 10), (1758, 0), (1765, 0),
    (1771, 0), (1776, 0), (1780, 15), (1788, 15), (1790, 10), (1793, 0), (1809, 0), (1814,
    0), (1819, 15), (1821, 15), (1826, 32), (1850, 32), (1858, 10), (1861, 0), (1877, 0),
    (1882, 0), (1887, 15), (1889, 15), (1898, 35), (1900, 35), (1908, 50), (1920, 50),
    (1928, 35), (1941, 35), (1943, 35), (1950, 10), (1953, 0), (1960, 0), (1980, 0), (1985,
    15), (1987, 15), (1996, 35), (1998, 35), (2006, 50), (2008, 50), (2021, 70), (2071, 70),
    (2075, 60), (2079, 50), (2148, 50), (2161, 70), (2211, 70), (2246, 100), (2276, 100),
    (2296, 120), (2306, 120), (2322, 80), (2330, 50), (2340, 0), (2360, 0),
)
